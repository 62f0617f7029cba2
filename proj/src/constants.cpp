#include "normlab/constants.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "normlab/rng.hpp"
#include "normlab/serialize.hpp"

namespace normlab {

std::string method_name(EstimateMethod m) {
    switch (m) {
    case EstimateMethod::exact_enumeration: return "exact-enumeration";
    case EstimateMethod::subgradient_ascent: return "subgradient-ascent";
    case EstimateMethod::random_search: return "random-search";
    case EstimateMethod::analytic: return "analytic";
    }
    return "?";
}

double operator_norm_ratio(const TransformPlan& plan, const NormSpec& spec,
                           const VectorFunction& f) {
    double nf = l2_norm(f, spec);
    if (nf == 0.0) throw std::invalid_argument("ratio undefined for the zero function");
    return l2_norm(plan.dft(f), spec) / nf;
}

ConstantEstimate operator_norm_lower(const FiniteAbelianGroup& g, const NormSpec& spec,
                                     const SearchBudget& budget, std::uint64_t seed) {
    if (budget.iterations < 1 || budget.restarts < 1)
        throw std::invalid_argument("search budget must be positive");
    const std::int64_t d = spec.dim();
    TransformPlan plan(g);
    NormSpec dual = spec.dual();
    const double w = g.haar_point_weight();

    double best = 0.0;
    std::optional<VectorFunction> best_f;
    std::int64_t evals = 0;

    for (std::int64_t rep = 0; rep < budget.restarts; ++rep) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(rep)));
        VectorFunction f(g, d);
        for (cplx& z : f.values()) z = rng.complex_gaussian();

        double prev = -1.0;
        for (std::int64_t it = 0; it < budget.iterations; ++it) {
            double nf = l2_norm(f, spec);
            if (nf == 0.0) break;
            VectorFunction fhat = plan.dft(f);
            ++evals;
            double ng = l2_norm(fhat, spec);
            double ratio = ng / nf;
            if (ratio > best) {
                best = ratio;
                best_f = f;
            }
            if (std::abs(ratio - prev) <= 1e-10 * std::max(1.0, ratio)) break;
            prev = ratio;
            if (ng == 0.0) break;

            // Norming functional of Ff in L2(G, X*): pointwise ascent
            // directions weighted by the norm profile.
            VectorFunction psi(g, d);
            for (std::int64_t xi = 0; xi < psi.size(); ++xi) {
                auto v = fhat.value(xi);
                double nv = spec.norm(v);
                if (nv == 0.0) continue;
                auto asc = spec.ascent_direction(v);
                auto dst = psi.value(xi);
                double c = nv / ng;
                for (std::int64_t j = 0; j < d; ++j) dst[static_cast<std::size_t>(j)] = c * asc[static_cast<std::size_t>(j)];
            }
            // Pull back through the adjoint (F is unitary for the L2
            // pairing, so the adjoint of F is F^{-1}).
            VectorFunction u = plan.idft(psi);

            // New input: the norming profile of u in the dual norm.
            std::vector<double> dn(static_cast<std::size_t>(u.size()));
            double acc = 0.0;
            for (std::int64_t t = 0; t < u.size(); ++t) {
                dn[static_cast<std::size_t>(t)] = dual.norm(u.value(t));
                acc += dn[static_cast<std::size_t>(t)] * dn[static_cast<std::size_t>(t)];
            }
            double nu = std::sqrt(w * acc);
            if (nu == 0.0) break;
            VectorFunction fnew(g, d);
            for (std::int64_t t = 0; t < u.size(); ++t) {
                if (dn[static_cast<std::size_t>(t)] == 0.0) continue;
                auto asc = dual.ascent_direction(u.value(t));
                auto dst = fnew.value(t);
                double c = dn[static_cast<std::size_t>(t)] / nu;
                for (std::int64_t j = 0; j < d; ++j) dst[static_cast<std::size_t>(j)] = c * asc[static_cast<std::size_t>(j)];
            }
            f = std::move(fnew);
        }
    }

    ConstantEstimate est;
    est.constant = "fourier_operator_norm";
    est.lower = best;
    est.upper = std::sqrt(static_cast<double>(g.cardinality()));
    est.method = EstimateMethod::subgradient_ascent;
    est.seed = seed;
    est.samples = evals;
    if (best_f) est.witness = nlohmann::json{{"input", to_json(*best_f)}};
    return est;
}

namespace {

// Squared norm without the sqrt round-trip: for Hilbert specs v^H G v is
// evaluated directly, so sums of exactly representable vectors stay exact.
double norm_sq(const NormSpec& spec, std::span<const cplx> v) {
    if (spec.is_hilbert()) return spec.inner_product(v, v).real();
    double n = spec.norm(v);
    return n * n;
}

double sum_norm_sq(const NormSpec& spec, const std::vector<std::vector<cplx>>& xs) {
    double denom = 0.0;
    for (const auto& x : xs) {
        if (static_cast<std::int64_t>(x.size()) != spec.dim())
            throw std::invalid_argument("vector dimension does not match norm");
        denom += norm_sq(spec, x);
    }
    if (denom == 0.0) throw std::invalid_argument("all vectors are zero");
    return denom;
}

} // namespace

RatioPair khinchin_ratio_exact(const NormSpec& spec, const std::vector<std::vector<cplx>>& xs) {
    const std::size_t n = xs.size();
    if (n == 0) throw std::invalid_argument("empty vector system");
    if (n > 20) throw std::invalid_argument("exact enumeration capped at 20 vectors");
    const std::int64_t d = spec.dim();
    double denom = sum_norm_sq(spec, xs);

    // Gray-code walk over sign patterns: one sign flip per step keeps the
    // running sum update O(d).
    std::vector<cplx> s(static_cast<std::size_t>(d), cplx{0.0, 0.0});
    for (const auto& x : xs)
        for (std::int64_t j = 0; j < d; ++j) s[static_cast<std::size_t>(j)] += x[static_cast<std::size_t>(j)];
    std::vector<double> sign(n, 1.0);
    double acc = norm_sq(spec, s);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        unsigned i = static_cast<unsigned>(std::countr_zero(k));
        sign[i] = -sign[i];
        const auto& x = xs[i];
        double c = 2.0 * sign[i];
        for (std::int64_t j = 0; j < d; ++j) s[static_cast<std::size_t>(j)] += c * x[static_cast<std::size_t>(j)];
        acc += norm_sq(spec, s);
    }
    double r = acc / static_cast<double>(total) / denom;
    return RatioPair{r, r};
}

double khinchin_ratio_mc(const NormSpec& spec, const std::vector<std::vector<cplx>>& xs,
                         std::int64_t samples, std::uint64_t seed) {
    if (xs.empty()) throw std::invalid_argument("empty vector system");
    if (samples < 1) throw std::invalid_argument("sample count must be positive");
    const std::int64_t d = spec.dim();
    double denom = sum_norm_sq(spec, xs);
    Rng rng(seed);
    double acc = 0.0;
    std::vector<cplx> s(static_cast<std::size_t>(d));
    for (std::int64_t it = 0; it < samples; ++it) {
        std::fill(s.begin(), s.end(), cplx{0.0, 0.0});
        std::uint64_t bits = 0;
        int have = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (have == 0) {
                bits = rng.next_u64();
                have = 64;
            }
            double sgn = (bits & 1) ? -1.0 : 1.0;
            bits >>= 1;
            --have;
            for (std::int64_t j = 0; j < d; ++j) s[static_cast<std::size_t>(j)] += sgn * xs[i][static_cast<std::size_t>(j)];
        }
        acc += norm_sq(spec, s);
    }
    return acc / static_cast<double>(samples) / denom;
}

double character_system_ratio(const FiniteAbelianGroup& g, const NormSpec& spec,
                              const std::vector<std::vector<cplx>>& xs,
                              const std::vector<Character>& xis) {
    if (xs.empty()) throw std::invalid_argument("empty vector system");
    if (xs.size() != xis.size())
        throw std::invalid_argument("need as many characters as vectors, got " +
                                    std::to_string(xis.size()) + " vs " + std::to_string(xs.size()));
    const std::int64_t d = spec.dim();
    double denom = sum_norm_sq(spec, xs);

    std::vector<std::vector<cplx>> tables;
    tables.reserve(xis.size());
    for (const auto& xi : xis) tables.push_back(character_values(g, xi));

    double acc = 0.0;
    std::vector<cplx> s(static_cast<std::size_t>(d));
    for (std::int64_t t = 0; t < g.cardinality(); ++t) {
        std::fill(s.begin(), s.end(), cplx{0.0, 0.0});
        for (std::size_t k = 0; k < xs.size(); ++k) {
            cplx ch = tables[k][static_cast<std::size_t>(t)];
            for (std::int64_t j = 0; j < d; ++j) s[static_cast<std::size_t>(j)] += ch * xs[k][static_cast<std::size_t>(j)];
        }
        acc += norm_sq(spec, s);
    }
    // Probability (normalized Haar) measure on G for this ratio.
    return acc / static_cast<double>(g.cardinality()) / denom;
}

double torus_partial_sum_ratio(const NormSpec& spec, const std::vector<std::vector<cplx>>& xs,
                               std::int64_t quad_points) {
    if (xs.empty() || xs.size() % 2 == 0)
        throw std::invalid_argument("need an odd number of vectors (k = -n..n)");
    const std::int64_t n = static_cast<std::int64_t>(xs.size() / 2);
    const std::int64_t floor_points = 4 * n + 4;
    if (quad_points < floor_points)
        throw std::invalid_argument("quadrature needs at least " + std::to_string(floor_points) +
                                    " points for degree " + std::to_string(n));
    const std::int64_t d = spec.dim();
    double denom = sum_norm_sq(spec, xs);

    constexpr double kTwoPi = 6.283185307179586476925286766559;
    std::vector<cplx> table(static_cast<std::size_t>(quad_points));
    for (std::int64_t e = 0; e < quad_points; ++e)
        table[static_cast<std::size_t>(e)] =
            std::polar(1.0, kTwoPi * static_cast<double>(e) / static_cast<double>(quad_points));

    double acc = 0.0;
    std::vector<cplx> s(static_cast<std::size_t>(d));
    for (std::int64_t m = 0; m < quad_points; ++m) {
        std::fill(s.begin(), s.end(), cplx{0.0, 0.0});
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::int64_t k = static_cast<std::int64_t>(i) - n;
            std::int64_t e = ((k * m) % quad_points + quad_points) % quad_points;
            cplx tw = table[static_cast<std::size_t>(e)];
            for (std::int64_t j = 0; j < d; ++j) s[static_cast<std::size_t>(j)] += tw * xs[i][static_cast<std::size_t>(j)];
        }
        acc += norm_sq(spec, s);
    }
    return acc / static_cast<double>(quad_points) / denom;
}

TorusQuadResult torus_partial_sum_auto(const NormSpec& spec,
                                       const std::vector<std::vector<cplx>>& xs, double rel_tol,
                                       std::int64_t max_points) {
    const std::int64_t n = static_cast<std::int64_t>(xs.size() / 2);
    std::int64_t m = std::max<std::int64_t>(4 * n + 4, 8);
    double prev = torus_partial_sum_ratio(spec, xs, m);
    while (2 * m <= max_points) {
        m *= 2;
        double cur = torus_partial_sum_ratio(spec, xs, m);
        if (std::abs(cur - prev) <= rel_tol * std::max(1.0, std::abs(cur)))
            return {cur, m, true};
        prev = cur;
    }
    return {prev, m, false};
}

HilbertnessReport hilbertness_probe(const NormSpec& spec, std::int64_t max_evaluations,
                                    std::uint64_t seed) {
    if (max_evaluations < 4) throw std::invalid_argument("probe budget too small");
    const std::int64_t d = spec.dim();
    HilbertnessReport rep;
    rep.seed = seed;
    rep.max_ratio = -1.0;
    rep.min_ratio = std::numeric_limits<double>::infinity();

    auto consider = [&](const std::vector<std::vector<cplx>>& xs) {
        double r = khinchin_ratio_exact(spec, xs).max_ratio;
        ++rep.evaluations;
        if (r > rep.max_ratio) {
            rep.max_ratio = r;
            rep.max_witness = xs;
        }
        if (r < rep.min_ratio) {
            rep.min_ratio = r;
            rep.min_witness = xs;
        }
        return r;
    };

    // Deterministic seeds: standard-basis prefixes already expose the
    // extremes of the classical sequence spaces.
    for (std::int64_t k = 2; k <= std::min<std::int64_t>(d, 6) && rep.evaluations < max_evaluations;
         ++k) {
        std::vector<std::vector<cplx>> xs(static_cast<std::size_t>(k),
                                          std::vector<cplx>(static_cast<std::size_t>(d), cplx{0.0, 0.0}));
        for (std::int64_t i = 0; i < k; ++i) xs[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
        consider(xs);
    }
    if (d == 1 && rep.evaluations < max_evaluations)
        consider({{cplx{1.0, 0.0}}, {cplx{1.0, 0.0}}});

    Rng rng(seed);
    std::int64_t rand_budget = (max_evaluations - rep.evaluations) / 3;
    for (std::int64_t it = 0; it < rand_budget && rep.evaluations < max_evaluations; ++it) {
        std::size_t k = static_cast<std::size_t>(2 + rng.below(3));
        std::vector<std::vector<cplx>> xs(k, std::vector<cplx>(static_cast<std::size_t>(d)));
        for (auto& x : xs)
            for (cplx& z : x) z = rng.complex_gaussian();
        consider(xs);
    }

    // Greedy hill climbs from the current extremes.
    for (int dir = 0; dir < 2 && rep.evaluations < max_evaluations; ++dir) {
        bool maximize = dir == 0;
        std::vector<std::vector<cplx>> cur = maximize ? rep.max_witness : rep.min_witness;
        double cur_val = maximize ? rep.max_ratio : rep.min_ratio;
        double step = 0.5;
        std::int64_t half = (max_evaluations - rep.evaluations) / (2 - dir);
        for (std::int64_t it = 0; it < half && rep.evaluations < max_evaluations; ++it) {
            std::size_t i = static_cast<std::size_t>(rng.below(cur.size()));
            std::size_t j = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(d)));
            std::vector<std::vector<cplx>> cand = cur;
            cand[i][j] += step * rng.complex_gaussian();
            double r = 0.0;
            try {
                r = consider(cand);
            } catch (const std::invalid_argument&) {
                continue; // perturbation drove the system to zero
            }
            if ((maximize && r > cur_val) || (!maximize && r < cur_val)) {
                cur = std::move(cand);
                cur_val = r;
            } else {
                step = std::max(step * 0.97, 1e-3);
            }
        }
    }

    rep.c_hat = std::max(rep.max_ratio, rep.min_ratio > 1e-300 ? 1.0 / rep.min_ratio :
                                        std::numeric_limits<double>::infinity());
    return rep;
}

} // namespace normlab
