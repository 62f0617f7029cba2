#include "normlab/group.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace normlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::int64_t positive_mod(std::int64_t a, std::int64_t n) {
    std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

} // namespace

std::int64_t group_cap() {
    if (const char* s = std::getenv("NORMLAB_GROUP_CAP")) {
        char* end = nullptr;
        long long v = std::strtoll(s, &end, 10);
        if (end != s && *end == '\0' && v > 0) return static_cast<std::int64_t>(v);
    }
    return kDefaultGroupCap;
}

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::int64_t> orders)
    : orders_(std::move(orders)) {
    const std::int64_t cap = group_cap();
    for (std::int64_t n : orders_) {
        if (n < 1)
            throw std::invalid_argument("group factor order must be >= 1, got " + std::to_string(n));
        if (card_ > cap / n)
            throw std::invalid_argument("group cardinality exceeds cap " + std::to_string(cap));
        card_ *= n;
    }
    strides_.assign(orders_.size(), 1);
    for (std::size_t j = orders_.size(); j-- > 1;)
        strides_[j - 1] = strides_[j] * orders_[j];
}

double FiniteAbelianGroup::haar_point_weight() const {
    return 1.0 / std::sqrt(static_cast<double>(card_));
}

std::int64_t FiniteAbelianGroup::index_of(std::span<const std::int64_t> coords) const {
    if (static_cast<std::int64_t>(coords.size()) != rank())
        throw std::invalid_argument("coordinate tuple has wrong rank");
    std::int64_t idx = 0;
    for (std::size_t j = 0; j < orders_.size(); ++j)
        idx += positive_mod(coords[j], orders_[j]) * strides_[j];
    return idx;
}

std::vector<std::int64_t> FiniteAbelianGroup::coords_of(std::int64_t index) const {
    if (index < 0 || index >= card_)
        throw std::invalid_argument("flat index out of range");
    std::vector<std::int64_t> c(orders_.size());
    for (std::size_t j = 0; j < orders_.size(); ++j) {
        c[j] = index / strides_[j];
        index %= strides_[j];
    }
    return c;
}

std::int64_t FiniteAbelianGroup::add(std::int64_t a, std::int64_t b) const {
    if (a < 0 || a >= card_ || b < 0 || b >= card_)
        throw std::invalid_argument("flat index out of range");
    std::int64_t idx = 0;
    for (std::size_t j = 0; j < orders_.size(); ++j) {
        std::int64_t aj = a / strides_[j], bj = b / strides_[j];
        a %= strides_[j];
        b %= strides_[j];
        idx += ((aj + bj) % orders_[j]) * strides_[j];
    }
    return idx;
}

std::int64_t FiniteAbelianGroup::negate(std::int64_t a) const {
    if (a < 0 || a >= card_)
        throw std::invalid_argument("flat index out of range");
    std::int64_t idx = 0;
    for (std::size_t j = 0; j < orders_.size(); ++j) {
        std::int64_t aj = a / strides_[j];
        a %= strides_[j];
        idx += ((orders_[j] - aj) % orders_[j]) * strides_[j];
    }
    return idx;
}

FiniteAbelianGroup direct_product(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
    std::vector<std::int64_t> orders = a.orders();
    orders.insert(orders.end(), b.orders().begin(), b.orders().end());
    return FiniteAbelianGroup(std::move(orders));
}

FiniteAbelianGroup parse_group(const std::string& raw) {
    std::string text;
    text.reserve(raw.size());
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) text += c;
    std::vector<std::int64_t> orders;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (std::tolower(static_cast<unsigned char>(text[pos])) != 'z')
            throw std::invalid_argument("bad group spec '" + text + "': expected 'Z' at position " +
                                        std::to_string(pos));
        ++pos;
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start)
            throw std::invalid_argument("bad group spec '" + text + "': missing order after 'Z'");
        orders.push_back(std::stoll(text.substr(start, pos - start)));
        if (pos < text.size()) {
            if (std::tolower(static_cast<unsigned char>(text[pos])) != 'x')
                throw std::invalid_argument("bad group spec '" + text + "': expected 'x' separator");
            ++pos;
            if (pos == text.size())
                throw std::invalid_argument("bad group spec '" + text + "': trailing separator");
        }
    }
    if (orders.empty())
        throw std::invalid_argument("bad group spec '" + text + "': empty");
    return FiniteAbelianGroup(std::move(orders));
}

std::string group_to_string(const FiniteAbelianGroup& g) {
    std::string s;
    for (std::size_t j = 0; j < g.orders().size(); ++j) {
        if (j) s += 'x';
        s += 'Z';
        s += std::to_string(g.orders()[j]);
    }
    return s;
}

cplx pairing(const FiniteAbelianGroup& g, const Character& xi, const GroupElement& t) {
    if (static_cast<std::int64_t>(xi.coords.size()) != g.rank() ||
        static_cast<std::int64_t>(t.coords.size()) != g.rank())
        throw std::invalid_argument("pairing: coordinate tuples have wrong rank");
    double theta = 0.0;
    for (std::size_t j = 0; j < g.orders().size(); ++j) {
        std::int64_t n = g.orders()[j];
        std::int64_t xij = positive_mod(xi.coords[j], n);
        std::int64_t tj = positive_mod(t.coords[j], n);
        theta += static_cast<double>((xij * tj) % n) / static_cast<double>(n);
    }
    theta -= std::floor(theta);
    return std::polar(1.0, kTwoPi * theta);
}

cplx pairing(const FiniteAbelianGroup& g, std::int64_t xi_index, std::int64_t t_index) {
    auto xi = g.coords_of(xi_index);
    auto t = g.coords_of(t_index);
    return pairing(g, Character{std::move(xi)}, GroupElement{std::move(t)});
}

bool pairing_is_one(const FiniteAbelianGroup& g, std::int64_t xi_index, std::int64_t t_index) {
    auto xi = g.coords_of(xi_index);
    auto t = g.coords_of(t_index);
    // Sum of reduced fractions (xi_j t_j mod n_j)/n_j over a common
    // denominator L = lcm(n_j); L divides |G| so it stays in int64.
    std::int64_t L = 1;
    for (std::int64_t n : g.orders()) L = std::lcm(L, n);
    std::int64_t r = 0;
    for (std::size_t j = 0; j < g.orders().size(); ++j) {
        std::int64_t n = g.orders()[j];
        r = (r + ((xi[j] * t[j]) % n) * (L / n)) % L;
    }
    return r == 0;
}

std::vector<cplx> character_values(const FiniteAbelianGroup& g, const Character& xi) {
    if (static_cast<std::int64_t>(xi.coords.size()) != g.rank())
        throw std::invalid_argument("character has wrong rank");
    std::vector<cplx> vals(static_cast<std::size_t>(g.cardinality()));
    for (std::int64_t t = 0; t < g.cardinality(); ++t)
        vals[static_cast<std::size_t>(t)] = pairing(g, xi, GroupElement{g.coords_of(t)});
    return vals;
}

std::vector<cplx> character_values(const FiniteAbelianGroup& g, std::int64_t xi_index) {
    return character_values(g, Character{g.coords_of(xi_index)});
}

Subgroup::Subgroup(const FiniteAbelianGroup& parent, std::vector<std::int64_t> elements)
    : parent_(parent), elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    for (std::int64_t e : elements_)
        if (e < 0 || e >= parent_.cardinality())
            throw std::invalid_argument("subgroup element out of range");
    if (elements_.empty() || elements_[0] != 0)
        throw std::invalid_argument("subgroup must contain the identity");
    for (std::int64_t a : elements_) {
        if (!contains(parent_.negate(a)))
            throw std::invalid_argument("subgroup not closed under negation");
        for (std::int64_t b : elements_)
            if (!contains(parent_.add(a, b)))
                throw std::invalid_argument("subgroup not closed under addition");
    }
}

Subgroup::Subgroup(const FiniteAbelianGroup& parent, std::vector<std::int64_t> elements, Trusted)
    : parent_(parent), elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
}

bool Subgroup::contains(std::int64_t index) const {
    return std::binary_search(elements_.begin(), elements_.end(), index);
}

Subgroup Subgroup::trivial(const FiniteAbelianGroup& parent) {
    return Subgroup(parent, {0}, Trusted{});
}

Subgroup Subgroup::full(const FiniteAbelianGroup& parent) {
    std::vector<std::int64_t> all(static_cast<std::size_t>(parent.cardinality()));
    std::iota(all.begin(), all.end(), 0);
    return Subgroup(parent, std::move(all), Trusted{});
}

Subgroup subgroup_from_generators(const FiniteAbelianGroup& g,
                                  const std::vector<GroupElement>& generators) {
    std::vector<std::int64_t> gens;
    gens.reserve(generators.size());
    for (const auto& h : generators)
        gens.push_back(g.index_of(h.coords));

    std::unordered_set<std::int64_t> seen{0};
    std::vector<std::int64_t> frontier{0};
    while (!frontier.empty()) {
        std::int64_t x = frontier.back();
        frontier.pop_back();
        for (std::int64_t h : gens) {
            std::int64_t y = g.add(x, h);
            if (seen.insert(y).second) frontier.push_back(y);
        }
    }
    return Subgroup(g, std::vector<std::int64_t>(seen.begin(), seen.end()), Subgroup::Trusted{});
}

Subgroup annihilator(const FiniteAbelianGroup& g, const Subgroup& k) {
    if (!g.same_shape(k.parent()))
        throw std::invalid_argument("annihilator: subgroup belongs to a different group");
    std::vector<std::int64_t> ann;
    for (std::int64_t xi = 0; xi < g.cardinality(); ++xi) {
        bool ok = true;
        for (std::int64_t e : k.elements()) {
            if (!pairing_is_one(g, xi, e)) {
                ok = false;
                break;
            }
        }
        if (ok) ann.push_back(xi);
    }
    return Subgroup(g, std::move(ann), Subgroup::Trusted{});
}

std::vector<std::vector<std::int64_t>> cosets(const FiniteAbelianGroup& g, const Subgroup& k) {
    if (!g.same_shape(k.parent()))
        throw std::invalid_argument("cosets: subgroup belongs to a different group");
    std::vector<bool> visited(static_cast<std::size_t>(g.cardinality()), false);
    std::vector<std::vector<std::int64_t>> out;
    for (std::int64_t t = 0; t < g.cardinality(); ++t) {
        if (visited[static_cast<std::size_t>(t)]) continue;
        std::vector<std::int64_t> coset;
        coset.reserve(k.elements().size());
        for (std::int64_t e : k.elements()) {
            std::int64_t y = g.add(t, e);
            visited[static_cast<std::size_t>(y)] = true;
            coset.push_back(y);
        }
        std::sort(coset.begin(), coset.end());
        out.push_back(std::move(coset));
    }
    return out;
}

std::vector<GroupElement> parse_generators(const FiniteAbelianGroup& g, const std::string& text) {
    std::vector<GroupElement> gens;
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto parse_int = [&]() -> std::int64_t {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start)
            throw std::invalid_argument("bad generator list '" + text + "'");
        return std::stoll(text.substr(start, pos - start));
    };
    skip_ws();
    while (pos < text.size()) {
        GroupElement e;
        if (text[pos] == '(') {
            ++pos;
            for (std::int64_t j = 0; j < g.rank(); ++j) {
                e.coords.push_back(parse_int());
                skip_ws();
                if (j + 1 < g.rank()) {
                    if (pos >= text.size() || text[pos] != ',')
                        throw std::invalid_argument("bad generator list '" + text + "'");
                    ++pos;
                }
            }
            skip_ws();
            if (pos >= text.size() || text[pos] != ')')
                throw std::invalid_argument("bad generator list '" + text + "'");
            ++pos;
        } else {
            if (g.rank() != 1)
                throw std::invalid_argument("bare integers only valid for rank-1 groups");
            e.coords.push_back(parse_int());
        }
        gens.push_back(std::move(e));
        skip_ws();
        if (pos < text.size()) {
            if (text[pos] != ',')
                throw std::invalid_argument("bad generator list '" + text + "'");
            ++pos;
            skip_ws();
        }
    }
    return gens;
}

} // namespace normlab
