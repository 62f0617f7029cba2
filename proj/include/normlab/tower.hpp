#pragma once

#include <utility>
#include <vector>

#include "normlab/group.hpp"
#include "normlab/l2.hpp"
#include "normlab/norms.hpp"

namespace normlab {

// Truncated tower Z/m^N with the chain of subgroups K_n = m^n (Z/m^N),
// K_0 > K_1 > ... > K_N = {0}. The quotient map onto level n identifies
// t with the half-open interval [j/m^n, (j+1)/m^n) of [0,1), j = digit
// prefix of t; tau is the left endpoint.
class Tower {
public:
    Tower(std::int64_t base, std::int64_t depth);

    std::int64_t base() const { return base_; }
    std::int64_t depth() const { return depth_; }
    const FiniteAbelianGroup& group() const { return group_; }
    std::int64_t cardinality() const { return group_.cardinality(); }

    FiniteAbelianGroup level_group(std::int64_t n) const;
    Subgroup level_subgroup(std::int64_t n) const; // K_n

    double tau(std::int64_t n, std::int64_t t) const;
    std::pair<double, double> interval(std::int64_t n, std::int64_t t) const;

    // r_i(t) = sign of sin(2^i pi tau(t)) with the half-open convention
    // (value +1 on the left endpoint of each positivity interval), i.e.
    // +1 iff floor(2^i t / m^N) is even. Requires 2^i | m^N.
    bool rademacher_representable(std::int64_t i) const;
    std::vector<double> rademacher(std::int64_t i) const;

private:
    std::int64_t base_;
    std::int64_t depth_;
    FiniteAbelianGroup group_;
};

// Character indices of the tower group ordered so that consecutive blocks
// line up with Rademacher spectra: ascending dyadic valuation of xi, then
// ascending xi, with xi = 0 last. On a base-2 tower the valuation-(i-1)
// class is exactly the spectral support of r_i.
std::vector<std::int64_t> walsh_ordered_characters(const Tower& tower);

// Same grouping but with the heaviest-tail member of each of the first
// `blocks` classes deferred to the end, so every block projection is
// genuinely inexact. Base-2 towers only.
std::vector<std::int64_t> adversarial_ordered_characters(const Tower& tower, std::int64_t blocks);

// Materialized character functions in a given index order (memory: one
// complex per (function, point) pair - keep |G| <= 2^10 or so).
std::vector<std::vector<cplx>> character_basis(const FiniteAbelianGroup& g,
                                               const std::vector<std::int64_t>& order);

struct BlockApproxBlock {
    std::int64_t first = 0;   // position in the ordered basis
    std::int64_t count = 0;   // block length
    std::int64_t target = 0;  // Rademacher index approximated
    double error = 0.0;       // ||r - h_proj||^2 remainder (probability measure)
    bool bound_met = false;   // error < eps/2^j (or hit the exact-zero floor)
};

struct BlockApproxResult {
    std::vector<BlockApproxBlock> blocks;
    std::vector<std::vector<cplx>> h; // unit-norm approximants, one per target
    bool all_met = false;
};

// Greedy prefix consumption of an orthonormal ordered basis: block j grows
// until the projection of r_{targets[j]} onto it captures all but eps/2^j
// of its mass (or the basis runs out; then bound_met = false and the best
// achieved error is reported). Blocks are consecutive and disjoint.
BlockApproxResult block_approximation(const Tower& tower,
                                      const std::vector<std::vector<cplx>>& f_system,
                                      const std::vector<std::int64_t>& targets, double eps);

// Two-sided data for the transfer inequality
//   int ||sum_j r_j x_j||^2 <= (sqrt(eps) + sqrt(C))^2 sum_j ||x_j||^2
// via the triangle route through the block approximants h_j.
struct TransferReport {
    double lhs = 0.0;       // int ||sum r_j x_j||^2 / probability measure
    double diff_part = 0.0; // int ||sum (r_j - h_j) x_j||^2
    double h_part = 0.0;    // int ||sum h_j x_j||^2
    double sum_sq = 0.0;    // sum ||x_j||^2
    double rhs = 0.0;       // (sqrt(eps) + sqrt(C))^2 * sum_sq
    double slack = 0.0;     // rhs - lhs
    bool diff_ok = false;   // diff_part <= eps * sum_sq
    bool h_ok = false;      // h_part <= C * sum_sq
    bool triangle_ok = false;
    bool bound_ok = false;  // lhs <= rhs
};

TransferReport transfer_inequality_check(const NormSpec& spec,
                                         const std::vector<std::vector<cplx>>& xs,
                                         const Tower& tower, const BlockApproxResult& approx,
                                         double eps, double c_system);

// Conjugation of the transform by a dual-to-group isomorphism alpha:
// with (R_alpha psi)(xi') = psi(alpha(xi')) |Q|^{-1/2} and the adjoint
// alpha* from <xi, alpha(xi')> = <alpha*(xi), xi'>, the composite
// R_{alpha*} F_dual R_alpha equals the probability-measure transform F_Q.
// F_dual uses counting measure on the dual; all conversion factors between
// the self-dual kernel and these measures are applied explicitly.
struct RAlphaReport {
    VectorFunction r_alpha;  // R_alpha psi
    VectorFunction via;      // R_{alpha*} F_dual R_alpha psi
    VectorFunction direct;   // F_Q psi
    double conjugation_residual = 0.0; // max pointwise gap / scale
    double isometry_residual = 0.0;    // | ||R_alpha psi|| - ||psi|| | / scale
};

// alpha maps dual flat indices to group flat indices; empty = identity.
// Throws if alpha is not a group isomorphism.
RAlphaReport ralpha_conjugation(const FiniteAbelianGroup& q, const std::vector<std::int64_t>& alpha,
                                const VectorFunction& psi);

// L2 norms under the two explicit measure conventions.
double l2_norm_probability(const VectorFunction& f, const NormSpec& spec);
double l2_norm_counting(const VectorFunction& f, const NormSpec& spec);

} // namespace normlab
