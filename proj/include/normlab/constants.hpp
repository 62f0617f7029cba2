#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "normlab/fourier.hpp"
#include "normlab/group.hpp"
#include "normlab/l2.hpp"
#include "normlab/norms.hpp"

namespace normlab {

enum class EstimateMethod { exact_enumeration, subgradient_ascent, random_search, analytic };

std::string method_name(EstimateMethod m);

// A measured constant with certified sidedness: `lower` is always a
// witnessed value; `upper` is +inf when nothing bounds it from above.
struct ConstantEstimate {
    std::string constant;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    EstimateMethod method = EstimateMethod::analytic;
    std::uint64_t seed = 0;
    std::int64_t samples = 0;
    nlohmann::json witness; // enough data to re-evaluate `lower` exactly
};

struct SearchBudget {
    std::int64_t iterations = 200;
    std::int64_t restarts = 32;
};

// Lower bound for ||F: L2(G,X) -> L2(G,X)|| by alternating subgradient
// ascent on the Rayleigh ratio ||Ff|| / ||f||, from `restarts` random
// starts. The witness is the best input function; upper bound is the
// universal sqrt|G|.
ConstantEstimate operator_norm_lower(const FiniteAbelianGroup& g, const NormSpec& spec,
                                     const SearchBudget& budget, std::uint64_t seed);

// One evaluation of the ratio for a given input function (used to replay
// witnesses).
double operator_norm_ratio(const TransformPlan& plan, const NormSpec& spec,
                           const VectorFunction& f);

// A (min, max) ratio pair. khinchin_ratio_exact averages over all sign
// patterns of one fixed vector family, so min == max there; the pair only
// spreads apart when ranging over candidate families (hilbertness_probe).
struct RatioPair {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};

// Exact Khinchin-type ratio: E_eps || sum eps_i x_i ||^2 / sum ||x_i||^2
// over all 2^n sign patterns (n <= 20), enumerated in Gray-code order.
// Returns the single ratio twice (min == max).
RatioPair khinchin_ratio_exact(const NormSpec& spec, const std::vector<std::vector<cplx>>& xs);

// Monte Carlo fallback for n > 20; returns the sample mean.
double khinchin_ratio_mc(const NormSpec& spec, const std::vector<std::vector<cplx>>& xs,
                         std::int64_t samples, std::uint64_t seed);

// (1/|G|) sum_t || sum_k <xi_k, t> x_k ||^2 / sum_k ||x_k||^2 for a finite
// character system {xi_k} and vectors {x_k}.
double character_system_ratio(const FiniteAbelianGroup& g, const NormSpec& spec,
                              const std::vector<std::vector<cplx>>& xs,
                              const std::vector<Character>& xis);

// int_0^1 || sum_{k=-n}^{n} e^{2 pi i k t} x_k ||^2 dt / sum ||x_k||^2 by
// M-point equispaced quadrature (exact for Hilbert norms once M > 2n; the
// floor M >= 4n+4 is enforced). xs has size 2n+1 ordered k = -n..n.
double torus_partial_sum_ratio(const NormSpec& spec, const std::vector<std::vector<cplx>>& xs,
                               std::int64_t quad_points);

struct TorusQuadResult {
    double value = 0.0;
    std::int64_t quad_points = 0;
    bool converged = false;
};

// Doubles M until successive values agree to rel_tol or max_points is hit.
TorusQuadResult torus_partial_sum_auto(const NormSpec& spec,
                                       const std::vector<std::vector<cplx>>& xs,
                                       double rel_tol = 1e-6, std::int64_t max_points = 1 << 16);

// Search for sign-system ratios far from 1. c_hat = max(max_ratio,
// 1/min_ratio) is a witnessed lower bound for the two-sided Khinchin
// constant; it equals 1 + O(tol) exactly for Hilbert norms.
struct HilbertnessReport {
    double max_ratio = 1.0;
    double min_ratio = 1.0;
    double c_hat = 1.0;
    std::vector<std::vector<cplx>> max_witness;
    std::vector<std::vector<cplx>> min_witness;
    std::int64_t evaluations = 0;
    std::uint64_t seed = 0;
};

HilbertnessReport hilbertness_probe(const NormSpec& spec, std::int64_t max_evaluations,
                                    std::uint64_t seed);

} // namespace normlab
