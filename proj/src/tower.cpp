#include "normlab/tower.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "normlab/fourier.hpp"

namespace normlab {

namespace {

// Error floor treated as "exactly captured" (pure double roundoff).
constexpr double kExactZero = 1e-11;

std::int64_t ipow(std::int64_t b, std::int64_t e) {
    std::int64_t r = 1;
    for (std::int64_t i = 0; i < e; ++i) r *= b;
    return r;
}

int dyadic_valuation(std::int64_t x) {
    int v = 0;
    while (x % 2 == 0) {
        x /= 2;
        ++v;
    }
    return v;
}

} // namespace

Tower::Tower(std::int64_t base, std::int64_t depth)
    : base_(base), depth_(depth),
      group_((base < 2 || depth < 1)
                 ? throw std::invalid_argument("tower needs base >= 2 and depth >= 1")
                 : std::vector<std::int64_t>{ipow(base, depth)}) {}

FiniteAbelianGroup Tower::level_group(std::int64_t n) const {
    if (n < 0 || n > depth_) throw std::invalid_argument("level exceeds tower depth");
    return FiniteAbelianGroup({ipow(base_, n)});
}

Subgroup Tower::level_subgroup(std::int64_t n) const {
    if (n < 0 || n > depth_) throw std::invalid_argument("level exceeds tower depth");
    return subgroup_from_generators(group_, {GroupElement{{ipow(base_, n) % cardinality()}}});
}

double Tower::tau(std::int64_t n, std::int64_t t) const {
    if (n < 0 || n > depth_) throw std::invalid_argument("level exceeds tower depth");
    if (t < 0 || t >= cardinality()) throw std::invalid_argument("point out of range");
    std::int64_t j = t / ipow(base_, depth_ - n);
    return static_cast<double>(j) / static_cast<double>(ipow(base_, n));
}

std::pair<double, double> Tower::interval(std::int64_t n, std::int64_t t) const {
    if (n < 0 || n > depth_) throw std::invalid_argument("level exceeds tower depth");
    if (t < 0 || t >= cardinality()) throw std::invalid_argument("point out of range");
    std::int64_t m = ipow(base_, n);
    std::int64_t j = t / ipow(base_, depth_ - n);
    return {static_cast<double>(j) / static_cast<double>(m),
            static_cast<double>(j + 1) / static_cast<double>(m)};
}

bool Tower::rademacher_representable(std::int64_t i) const {
    if (i < 1 || i > 62) return false;
    std::int64_t p = std::int64_t{1} << i;
    return p <= cardinality() && cardinality() % p == 0;
}

std::vector<double> Tower::rademacher(std::int64_t i) const {
    if (!rademacher_representable(i))
        throw std::invalid_argument(
            "rademacher index " + std::to_string(i) +
            " not representable at this depth (2^i must divide the cardinality)");
    const std::int64_t card = cardinality();
    std::vector<double> r(static_cast<std::size_t>(card));
    for (std::int64_t t = 0; t < card; ++t) {
        std::int64_t u = (t << i) / card;
        r[static_cast<std::size_t>(t)] = (u % 2 == 0) ? 1.0 : -1.0;
    }
    return r;
}

std::vector<std::int64_t> walsh_ordered_characters(const Tower& tower) {
    const std::int64_t card = tower.cardinality();
    std::vector<std::int64_t> order;
    order.reserve(static_cast<std::size_t>(card));
    for (std::int64_t xi = 1; xi < card; ++xi) order.push_back(xi);
    std::stable_sort(order.begin(), order.end(), [](std::int64_t a, std::int64_t b) {
        int va = dyadic_valuation(a), vb = dyadic_valuation(b);
        return va != vb ? va < vb : a < b;
    });
    order.push_back(0);
    return order;
}

std::vector<std::int64_t> adversarial_ordered_characters(const Tower& tower, std::int64_t blocks) {
    if (tower.base() != 2)
        throw std::invalid_argument("adversarial ordering defined for base-2 towers");
    if (blocks < 1 || blocks >= tower.depth())
        throw std::invalid_argument("block count must be in [1, depth)");
    const std::int64_t card = tower.cardinality();
    const std::int64_t half = card / 2;

    std::vector<std::vector<std::int64_t>> classes(static_cast<std::size_t>(tower.depth()));
    for (std::int64_t xi = 1; xi < card; ++xi)
        classes[static_cast<std::size_t>(dyadic_valuation(xi))].push_back(xi);

    std::vector<std::int64_t> order, deferred;
    order.reserve(static_cast<std::size_t>(card));
    for (std::int64_t j = 0; j < blocks; ++j) {
        auto& cls = classes[static_cast<std::size_t>(j)];
        // Push the spectrally lightest member (nearest the top frequency)
        // out of its block so the projection cannot be exact.
        std::size_t defer = 0;
        for (std::size_t i = 1; i < cls.size(); ++i)
            if (std::llabs(cls[i] - half) < std::llabs(cls[defer] - half)) defer = i;
        deferred.push_back(cls[defer]);
        for (std::size_t i = 0; i < cls.size(); ++i)
            if (i != defer) order.push_back(cls[i]);
    }
    for (std::int64_t x : deferred) order.push_back(x);
    for (std::size_t j = static_cast<std::size_t>(blocks); j < classes.size(); ++j)
        for (std::int64_t x : classes[j]) order.push_back(x);
    order.push_back(0);
    return order;
}

std::vector<std::vector<cplx>> character_basis(const FiniteAbelianGroup& g,
                                               const std::vector<std::int64_t>& order) {
    std::vector<std::vector<cplx>> basis;
    basis.reserve(order.size());
    for (std::int64_t xi : order) basis.push_back(character_values(g, xi));
    return basis;
}

BlockApproxResult block_approximation(const Tower& tower,
                                      const std::vector<std::vector<cplx>>& f_system,
                                      const std::vector<std::int64_t>& targets, double eps) {
    if (eps < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
    if (targets.empty()) throw std::invalid_argument("no targets");
    const std::int64_t card = tower.cardinality();
    const double w = 1.0 / static_cast<double>(card);
    for (const auto& f : f_system) {
        if (static_cast<std::int64_t>(f.size()) != card)
            throw std::invalid_argument("f-system function has wrong size");
        double n2 = 0.0;
        for (cplx z : f) n2 += z.real() * z.real() + z.imag() * z.imag();
        if (std::abs(w * n2 - 1.0) > 1e-9)
            throw std::invalid_argument("f-system functions must have unit probability-L2 norm");
    }

    BlockApproxResult res;
    res.all_met = true;
    std::size_t cursor = 0;
    for (std::size_t j = 0; j < targets.size(); ++j) {
        std::vector<double> r = tower.rademacher(targets[j]);
        const double bound = eps / std::pow(2.0, static_cast<double>(j + 1));

        BlockApproxBlock blk;
        blk.first = static_cast<std::int64_t>(cursor);
        blk.target = targets[j];
        std::vector<cplx> coeffs;
        double err = 1.0; // ||r||^2 = 1 under the probability measure
        while (cursor < f_system.size()) {
            const auto& f = f_system[cursor];
            cplx c{0.0, 0.0};
            for (std::int64_t t = 0; t < card; ++t)
                c += r[static_cast<std::size_t>(t)] * std::conj(f[static_cast<std::size_t>(t)]);
            c *= w;
            coeffs.push_back(c);
            err -= c.real() * c.real() + c.imag() * c.imag();
            ++cursor;
            if (err < bound || err <= kExactZero) break;
        }
        err = std::max(err, 0.0);
        blk.count = static_cast<std::int64_t>(cursor) - blk.first;
        blk.error = err;
        blk.bound_met = (err < bound) || (err <= kExactZero);
        if (!blk.bound_met) res.all_met = false;

        double mass = 0.0;
        for (cplx c : coeffs) mass += c.real() * c.real() + c.imag() * c.imag();
        std::vector<cplx> h(static_cast<std::size_t>(card), cplx{0.0, 0.0});
        if (mass > 0.0) {
            double inv = 1.0 / std::sqrt(mass);
            for (std::size_t k = 0; k < coeffs.size(); ++k) {
                const auto& f = f_system[static_cast<std::size_t>(blk.first) + k];
                cplx c = coeffs[k] * inv;
                for (std::int64_t t = 0; t < card; ++t) h[static_cast<std::size_t>(t)] += c * f[static_cast<std::size_t>(t)];
            }
        } else {
            blk.bound_met = false;
            res.all_met = false;
        }
        res.blocks.push_back(blk);
        res.h.push_back(std::move(h));
    }
    return res;
}

TransferReport transfer_inequality_check(const NormSpec& spec,
                                         const std::vector<std::vector<cplx>>& xs,
                                         const Tower& tower, const BlockApproxResult& approx,
                                         double eps, double c_system) {
    const std::size_t n = xs.size();
    if (n == 0 || n != approx.blocks.size())
        throw std::invalid_argument("need one vector per approximated block");
    const std::int64_t card = tower.cardinality();
    const std::int64_t d = spec.dim();
    for (const auto& x : xs)
        if (static_cast<std::int64_t>(x.size()) != d)
            throw std::invalid_argument("vector dimension does not match norm");

    std::vector<std::vector<double>> r;
    r.reserve(n);
    for (const auto& blk : approx.blocks) r.push_back(tower.rademacher(blk.target));

    TransferReport rep;
    std::vector<cplx> sr(static_cast<std::size_t>(d)), sd(static_cast<std::size_t>(d)),
        sh(static_cast<std::size_t>(d));
    for (std::int64_t t = 0; t < card; ++t) {
        std::fill(sr.begin(), sr.end(), cplx{0.0, 0.0});
        std::fill(sd.begin(), sd.end(), cplx{0.0, 0.0});
        std::fill(sh.begin(), sh.end(), cplx{0.0, 0.0});
        for (std::size_t j = 0; j < n; ++j) {
            double rv = r[j][static_cast<std::size_t>(t)];
            cplx hv = approx.h[j][static_cast<std::size_t>(t)];
            for (std::int64_t c = 0; c < d; ++c) {
                cplx x = xs[j][static_cast<std::size_t>(c)];
                sr[static_cast<std::size_t>(c)] += rv * x;
                sd[static_cast<std::size_t>(c)] += (rv - hv) * x;
                sh[static_cast<std::size_t>(c)] += hv * x;
            }
        }
        double a = spec.norm(sr), b = spec.norm(sd), c = spec.norm(sh);
        rep.lhs += a * a;
        rep.diff_part += b * b;
        rep.h_part += c * c;
    }
    const double w = 1.0 / static_cast<double>(card);
    rep.lhs *= w;
    rep.diff_part *= w;
    rep.h_part *= w;
    for (const auto& x : xs) {
        double nx = spec.norm(x);
        rep.sum_sq += nx * nx;
    }
    double root = std::sqrt(eps) + std::sqrt(c_system);
    rep.rhs = root * root * rep.sum_sq;
    rep.slack = rep.rhs - rep.lhs;
    const double tol = 1e-9 * std::max(1.0, rep.sum_sq);
    rep.diff_ok = rep.diff_part <= eps * rep.sum_sq + tol;
    rep.h_ok = rep.h_part <= c_system * rep.sum_sq + tol;
    rep.triangle_ok =
        std::sqrt(rep.lhs) <= std::sqrt(rep.diff_part) + std::sqrt(rep.h_part) + 1e-9;
    rep.bound_ok = rep.lhs <= rep.rhs + tol;
    return rep;
}

double l2_norm_probability(const VectorFunction& f, const NormSpec& spec) {
    double acc = 0.0;
    for (std::int64_t t = 0; t < f.size(); ++t) {
        double n = spec.norm(f.value(t));
        acc += n * n;
    }
    return std::sqrt(acc / static_cast<double>(f.size()));
}

double l2_norm_counting(const VectorFunction& f, const NormSpec& spec) {
    double acc = 0.0;
    for (std::int64_t t = 0; t < f.size(); ++t) {
        double n = spec.norm(f.value(t));
        acc += n * n;
    }
    return std::sqrt(acc);
}

RAlphaReport ralpha_conjugation(const FiniteAbelianGroup& q, const std::vector<std::int64_t>& alpha,
                                const VectorFunction& psi) {
    if (!psi.group().same_shape(q))
        throw std::invalid_argument("psi does not live on the given group");
    const std::int64_t card = q.cardinality();
    const std::int64_t rank = q.rank();
    const std::int64_t d = psi.dim();

    std::vector<std::int64_t> a(alpha);
    if (a.empty()) {
        a.resize(static_cast<std::size_t>(card));
        for (std::int64_t i = 0; i < card; ++i) a[static_cast<std::size_t>(i)] = i;
    }
    if (static_cast<std::int64_t>(a.size()) != card)
        throw std::invalid_argument("alpha table has wrong size");
    std::vector<bool> hit(static_cast<std::size_t>(card), false);
    for (std::int64_t v : a) {
        if (v < 0 || v >= card || hit[static_cast<std::size_t>(v)])
            throw std::invalid_argument("alpha is not a bijection");
        hit[static_cast<std::size_t>(v)] = true;
    }
    for (std::int64_t x = 0; x < card; ++x)
        for (std::int64_t y = x; y < card; ++y)
            if (a[static_cast<std::size_t>(q.add(x, y))] !=
                q.add(a[static_cast<std::size_t>(x)], a[static_cast<std::size_t>(y)]))
                throw std::invalid_argument("alpha is not a homomorphism");

    // alpha* from the pairing identity, exactly in integer arithmetic:
    // the phase of <xi, alpha(delta_i)> is an n_i-th root of unity because
    // delta_i has order n_i; its exact exponent is coordinate i of
    // alpha*(xi).
    std::int64_t lcm_all = 1;
    for (std::int64_t n : q.orders()) lcm_all = std::lcm(lcm_all, n);
    std::vector<std::vector<std::int64_t>> gen_images(static_cast<std::size_t>(rank));
    for (std::int64_t i = 0; i < rank; ++i) {
        std::vector<std::int64_t> delta(static_cast<std::size_t>(rank), 0);
        delta[static_cast<std::size_t>(i)] = 1;
        gen_images[static_cast<std::size_t>(i)] =
            q.coords_of(a[static_cast<std::size_t>(q.index_of(delta))]);
    }
    std::vector<std::int64_t> astar(static_cast<std::size_t>(card));
    for (std::int64_t xi = 0; xi < card; ++xi) {
        auto xc = q.coords_of(xi);
        std::vector<std::int64_t> out(static_cast<std::size_t>(rank));
        for (std::int64_t i = 0; i < rank; ++i) {
            std::int64_t v = 0;
            for (std::int64_t j = 0; j < rank; ++j) {
                std::int64_t n = q.orders()[static_cast<std::size_t>(j)];
                v = (v + ((xc[static_cast<std::size_t>(j)] *
                           gen_images[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) %
                          n) *
                             (lcm_all / n)) %
                    lcm_all;
            }
            std::int64_t ni = q.orders()[static_cast<std::size_t>(i)];
            if ((v * ni) % lcm_all != 0)
                throw std::logic_error("alpha* phase is not an exact root of unity");
            out[static_cast<std::size_t>(i)] = (v * ni / lcm_all) % ni;
        }
        astar[static_cast<std::size_t>(xi)] = q.index_of(out);
    }

    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(card));

    // (R_alpha psi)(xi') = psi(alpha(xi')) |Q|^{-1/2}
    VectorFunction r_alpha(q, d);
    for (std::int64_t xi = 0; xi < card; ++xi) {
        auto src = psi.value(a[static_cast<std::size_t>(xi)]);
        auto dst = r_alpha.value(xi);
        for (std::int64_t j = 0; j < d; ++j) dst[static_cast<std::size_t>(j)] = inv_sqrt * src[static_cast<std::size_t>(j)];
    }

    TransformPlan plan(q);
    // F_dual: counting measure on the dual = sqrt|Q| times the self-dual
    // kernel sum; F_Q: probability measure = |Q|^{-1/2} times it.
    VectorFunction fd = plan.dft(r_alpha);
    for (cplx& z : fd.values()) z *= std::sqrt(static_cast<double>(card));
    VectorFunction via(q, d);
    for (std::int64_t xi = 0; xi < card; ++xi) {
        auto src = fd.value(astar[static_cast<std::size_t>(xi)]);
        auto dst = via.value(xi);
        for (std::int64_t j = 0; j < d; ++j) dst[static_cast<std::size_t>(j)] = inv_sqrt * src[static_cast<std::size_t>(j)];
    }
    VectorFunction direct = plan.dft(psi);
    for (cplx& z : direct.values()) z *= inv_sqrt;

    double scale = 0.0;
    for (std::int64_t t = 0; t < card; ++t)
        for (cplx z : direct.value(t)) scale = std::max(scale, std::abs(z));
    if (scale == 0.0) scale = 1.0;
    double worst = 0.0;
    for (std::int64_t t = 0; t < card; ++t) {
        auto u = via.value(t);
        auto v = direct.value(t);
        for (std::int64_t j = 0; j < d; ++j)
            worst = std::max(worst, std::abs(u[static_cast<std::size_t>(j)] - v[static_cast<std::size_t>(j)]));
    }

    // Isometry L2(Q, prob) -> L2(dual, counting), Euclidean coordinates.
    double np = 0.0, nc = 0.0;
    for (std::int64_t t = 0; t < card; ++t) {
        for (cplx z : psi.value(t)) np += z.real() * z.real() + z.imag() * z.imag();
        for (cplx z : r_alpha.value(t)) nc += z.real() * z.real() + z.imag() * z.imag();
    }
    np = std::sqrt(np / static_cast<double>(card));
    nc = std::sqrt(nc);

    RAlphaReport rep{std::move(r_alpha), std::move(via), std::move(direct), worst / scale,
                     std::abs(np - nc) / std::max(1.0, np)};
    return rep;
}

} // namespace normlab
