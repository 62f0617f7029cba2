#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace normlab {

using cplx = std::complex<double>;

inline constexpr std::int64_t kDefaultGroupCap = std::int64_t{1} << 20;

// Cardinality cap for instantiated groups; override with NORMLAB_GROUP_CAP.
std::int64_t group_cap();

struct GroupElement {
    std::vector<std::int64_t> coords;
};

// Characters of a product of cyclic groups are indexed by the same
// coordinates as elements (the dual group has the same factor orders).
struct Character {
    std::vector<std::int64_t> coords;
};

// Finite abelian group presented as Z/n1 x ... x Z/nr. Elements are handled
// either as coordinate tuples or as flat indices in row-major order (first
// factor slowest).
class FiniteAbelianGroup {
public:
    explicit FiniteAbelianGroup(std::vector<std::int64_t> orders);

    const std::vector<std::int64_t>& orders() const { return orders_; }
    std::int64_t rank() const { return static_cast<std::int64_t>(orders_.size()); }
    std::int64_t cardinality() const { return card_; }

    // Point mass of the self-dual Haar measure: |G|^{-1/2}, so the total
    // measure of G is |G|^{1/2}.
    double haar_point_weight() const;

    std::int64_t index_of(std::span<const std::int64_t> coords) const;
    std::vector<std::int64_t> coords_of(std::int64_t index) const;

    std::int64_t add(std::int64_t a, std::int64_t b) const;
    std::int64_t negate(std::int64_t a) const;

    bool same_shape(const FiniteAbelianGroup& other) const { return orders_ == other.orders_; }

private:
    std::vector<std::int64_t> orders_;
    std::vector<std::int64_t> strides_;
    std::int64_t card_ = 1;
};

FiniteAbelianGroup direct_product(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b);

// "Z4xZ2xZ3" -> Z/4 x Z/2 x Z/3 (case-insensitive, factors in written order).
FiniteAbelianGroup parse_group(const std::string& text);
std::string group_to_string(const FiniteAbelianGroup& g);

// <xi, t> = exp(2 pi i sum_j xi_j t_j / n_j). Phase is accumulated as an
// exact reduced rational before the single exp, so unit roots are as exact
// as the double exp itself.
cplx pairing(const FiniteAbelianGroup& g, const Character& xi, const GroupElement& t);
cplx pairing(const FiniteAbelianGroup& g, std::int64_t xi_index, std::int64_t t_index);

// Exact test of <xi, t> == 1 in integer arithmetic (no floating point).
bool pairing_is_one(const FiniteAbelianGroup& g, std::int64_t xi_index, std::int64_t t_index);

// Values of the character xi on all of G, in flat-index order.
std::vector<cplx> character_values(const FiniteAbelianGroup& g, const Character& xi);
std::vector<cplx> character_values(const FiniteAbelianGroup& g, std::int64_t xi_index);

class Subgroup {
public:
    // Validates closure under addition and negation and membership of 0.
    // Cost is O(|S|^2 log |S|).
    Subgroup(const FiniteAbelianGroup& parent, std::vector<std::int64_t> elements);

    const FiniteAbelianGroup& parent() const { return parent_; }
    const std::vector<std::int64_t>& elements() const { return elements_; }
    std::int64_t size() const { return static_cast<std::int64_t>(elements_.size()); }
    bool contains(std::int64_t index) const;

    static Subgroup trivial(const FiniteAbelianGroup& parent);
    static Subgroup full(const FiniteAbelianGroup& parent);

private:
    struct Trusted {};
    Subgroup(const FiniteAbelianGroup& parent, std::vector<std::int64_t> elements, Trusted);

    friend Subgroup subgroup_from_generators(const FiniteAbelianGroup&,
                                             const std::vector<GroupElement>&);
    friend Subgroup annihilator(const FiniteAbelianGroup&, const Subgroup&);

    FiniteAbelianGroup parent_;
    std::vector<std::int64_t> elements_; // sorted flat indices
};

Subgroup subgroup_from_generators(const FiniteAbelianGroup& g,
                                  const std::vector<GroupElement>& generators);

// K^perp = { xi : <xi, k> = 1 for all k in K }, as a subgroup of the dual
// group (same orders as g).
Subgroup annihilator(const FiniteAbelianGroup& g, const Subgroup& k);

// Cosets of K in G as sorted flat-index lists; the coset of 0 (i.e. K
// itself) comes first, the rest ordered by their minimal representative.
std::vector<std::vector<std::int64_t>> cosets(const FiniteAbelianGroup& g, const Subgroup& k);

// "(1,0),(0,2)" -> coordinate tuples; bare "1,3" accepted for rank-1 groups.
std::vector<GroupElement> parse_generators(const FiniteAbelianGroup& g, const std::string& text);

} // namespace normlab
