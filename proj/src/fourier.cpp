#include "normlab/fourier.hpp"

#include <cmath>
#include <stdexcept>

namespace normlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<std::int64_t> prime_factors_ascending(std::int64_t n) {
    std::vector<std::int64_t> f;
    for (std::int64_t p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            f.push_back(p);
            n /= p;
        }
    if (n > 1) f.push_back(n);
    return f;
}

double coord_norm2(std::span<const cplx> v) {
    double s = 0.0;
    for (cplx z : v) s += z.real() * z.real() + z.imag() * z.imag();
    return std::sqrt(s);
}

} // namespace

TransformPlan::TransformPlan(FiniteAbelianGroup group, TransformStrategy strategy)
    : group_(std::move(group)), strategy_(strategy) {
    roots_.reserve(group_.orders().size());
    factors_.reserve(group_.orders().size());
    for (std::int64_t n : group_.orders()) {
        std::vector<cplx> table(static_cast<std::size_t>(n));
        for (std::int64_t k = 0; k < n; ++k)
            table[static_cast<std::size_t>(k)] =
                std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(n));
        roots_.push_back(std::move(table));
        factors_.push_back(prime_factors_ascending(n));
    }
}

VectorFunction TransformPlan::dft(const VectorFunction& f) const { return apply(f, +1); }

VectorFunction TransformPlan::idft(const VectorFunction& f) const { return apply(f, -1); }

VectorFunction TransformPlan::apply(const VectorFunction& f, int sign) const {
    if (!f.group().same_shape(group_))
        throw std::invalid_argument("function group does not match plan group");
    const std::int64_t card = group_.cardinality();
    const std::int64_t d = f.dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(card));

    if (strategy_ == TransformStrategy::naive) {
        const std::int64_t rank = group_.rank();
        VectorFunction out(group_, d);
        std::vector<std::int64_t> xi(static_cast<std::size_t>(rank), 0);
        for (std::int64_t xidx = 0; xidx < card; ++xidx) {
            auto dst = out.value(xidx);
            std::vector<std::int64_t> t(static_cast<std::size_t>(rank), 0);
            for (std::int64_t tidx = 0; tidx < card; ++tidx) {
                cplx kernel{1.0, 0.0};
                for (std::int64_t j = 0; j < rank; ++j) {
                    std::int64_t n = group_.orders()[static_cast<std::size_t>(j)];
                    std::int64_t e = (xi[static_cast<std::size_t>(j)] * t[static_cast<std::size_t>(j)]) % n;
                    if (sign < 0) e = (n - e) % n;
                    kernel *= roots_[static_cast<std::size_t>(j)][static_cast<std::size_t>(e)];
                }
                auto src = f.value(tidx);
                for (std::int64_t c = 0; c < d; ++c) dst[static_cast<std::size_t>(c)] += kernel * src[static_cast<std::size_t>(c)];
                // increment mixed-radix counter t
                for (std::int64_t j = rank; j-- > 0;) {
                    if (++t[static_cast<std::size_t>(j)] < group_.orders()[static_cast<std::size_t>(j)]) break;
                    t[static_cast<std::size_t>(j)] = 0;
                }
            }
            for (std::int64_t j = rank; j-- > 0;) {
                if (++xi[static_cast<std::size_t>(j)] < group_.orders()[static_cast<std::size_t>(j)]) break;
                xi[static_cast<std::size_t>(j)] = 0;
            }
        }
        for (cplx& z : out.values()) z *= scale;
        return out;
    }

    std::vector<cplx> data = f.values();
    for (std::size_t axis = 0; axis < group_.orders().size(); ++axis) fft_axis(data, axis, d, sign);
    for (cplx& z : data) z *= scale;
    return VectorFunction(group_, d, std::move(data));
}

void TransformPlan::fft_axis(std::vector<cplx>& data, std::size_t axis, std::int64_t dim,
                             int sign) const {
    const std::int64_t n = group_.orders()[axis];
    if (n == 1) return;
    std::int64_t before = 1, after = 1;
    for (std::size_t j = 0; j < axis; ++j) before *= group_.orders()[j];
    for (std::size_t j = axis + 1; j < group_.orders().size(); ++j) after *= group_.orders()[j];
    const std::int64_t after_d = after * dim;

    std::vector<cplx> line_out(static_cast<std::size_t>(n));
    std::vector<cplx> line_scratch(static_cast<std::size_t>(n));
    const auto& table = roots_[axis];
    const std::int64_t* fac = factors_[axis].data();

    for (std::int64_t b = 0; b < before; ++b) {
        for (std::int64_t a = 0; a < after_d; ++a) {
            cplx* base = data.data() + b * n * after_d + a;
            fft_rec(base, after_d, line_out.data(), line_scratch.data(), n, 1, fac, table, n, sign);
            for (std::int64_t k = 0; k < n; ++k) base[k * after_d] = line_out[static_cast<std::size_t>(k)];
        }
    }
}

// Computes out[k] = sum_j omega^{jk} in[j * in_stride], omega = exp(sign 2
// pi i / n) looked up as table[(e * sigma) mod table_n]. scratch holds the
// sub-transform results; sub-calls ping-pong between out and scratch.
void TransformPlan::fft_rec(const cplx* in, std::int64_t in_stride, cplx* out, cplx* scratch,
                            std::int64_t n, std::int64_t sigma, const std::int64_t* factor,
                            const std::vector<cplx>& table, std::int64_t table_n, int sign) const {
    if (n == 1) {
        out[0] = in[0];
        return;
    }
    const std::int64_t p = *factor;
    const std::int64_t m = n / p;
    for (std::int64_t c = 0; c < p; ++c)
        fft_rec(in + c * in_stride, in_stride * p, scratch + c * m, out + c * m, m, sigma * p,
                factor + 1, table, table_n, sign);
    for (std::int64_t q = 0; q < m; ++q) {
        for (std::int64_t r = 0; r < p; ++r) {
            const std::int64_t k = q + m * r;
            cplx acc{0.0, 0.0};
            for (std::int64_t c = 0; c < p; ++c) {
                std::int64_t e = ((c * k) % n) * sigma % table_n;
                if (sign < 0) e = (table_n - e) % table_n;
                acc += table[static_cast<std::size_t>(e)] * scratch[c * m + q];
            }
            out[k] = acc;
        }
    }
}

VectorFunction reflect(const VectorFunction& f) {
    VectorFunction out(f.group(), f.dim());
    for (std::int64_t t = 0; t < f.size(); ++t) {
        auto dst = out.value(f.group().negate(t));
        auto src = f.value(t);
        for (std::int64_t j = 0; j < f.dim(); ++j) dst[static_cast<std::size_t>(j)] = src[static_cast<std::size_t>(j)];
    }
    return out;
}

VectorFunction tensor_embedding(const VectorFunction& f, const FiniteAbelianGroup& g2,
                                std::span<const cplx> psi) {
    if (static_cast<std::int64_t>(psi.size()) != g2.cardinality())
        throw std::invalid_argument("psi has wrong size for the second factor group");
    double n = scalar_l2_norm(g2, psi);
    if (std::abs(n - 1.0) > 1e-9)
        throw std::invalid_argument("psi must have unit L2 norm, got " + std::to_string(n));
    FiniteAbelianGroup prod = direct_product(f.group(), g2);
    VectorFunction out(prod, f.dim());
    const std::int64_t c2 = g2.cardinality();
    const std::int64_t d = f.dim();
    for (std::int64_t t = 0; t < f.size(); ++t) {
        auto src = f.value(t);
        for (std::int64_t s = 0; s < c2; ++s) {
            auto dst = out.value(t * c2 + s);
            for (std::int64_t j = 0; j < d; ++j)
                dst[static_cast<std::size_t>(j)] = src[static_cast<std::size_t>(j)] * psi[static_cast<std::size_t>(s)];
        }
    }
    return out;
}

namespace {

// max_t ||f(t)||_2 over a set of points.
double max_coord_norm(const VectorFunction& f) {
    double m = 0.0;
    for (std::int64_t t = 0; t < f.size(); ++t) m = std::max(m, coord_norm2(f.value(t)));
    return m;
}

double support_residual(const VectorFunction& f, const Subgroup& s) {
    double worst = 0.0;
    for (std::int64_t t = 0; t < f.size(); ++t)
        if (!s.contains(t)) worst = std::max(worst, coord_norm2(f.value(t)));
    return worst;
}

double constancy_residual(const VectorFunction& f, const Subgroup& s) {
    double worst = 0.0;
    const std::int64_t d = f.dim();
    for (const auto& coset : cosets(f.group(), s)) {
        std::vector<cplx> mean(static_cast<std::size_t>(d), cplx{0.0, 0.0});
        for (std::int64_t t : coset) {
            auto v = f.value(t);
            for (std::int64_t j = 0; j < d; ++j) mean[static_cast<std::size_t>(j)] += v[static_cast<std::size_t>(j)];
        }
        for (cplx& z : mean) z /= static_cast<double>(coset.size());
        for (std::int64_t t : coset) {
            auto v = f.value(t);
            double dev = 0.0;
            for (std::int64_t j = 0; j < d; ++j) {
                cplx diff = v[static_cast<std::size_t>(j)] - mean[static_cast<std::size_t>(j)];
                dev += diff.real() * diff.real() + diff.imag() * diff.imag();
            }
            worst = std::max(worst, std::sqrt(dev));
        }
    }
    return worst;
}

} // namespace

SupportCosetReport support_coset_check(const TransformPlan& plan, const VectorFunction& f,
                                       const Subgroup& h, const Subgroup& k) {
    if (!f.group().same_shape(h.parent()) || !f.group().same_shape(k.parent()))
        throw std::invalid_argument("subgroups belong to a different group");
    constexpr double kTol = 1e-10;
    SupportCosetReport rep;

    double fscale = max_coord_norm(f);
    double fs = fscale > 0.0 ? fscale : 1.0;
    rep.input_support_residual = support_residual(f, h) / fs;
    rep.input_constancy_residual = constancy_residual(f, k) / fs;
    rep.input_supported_ok = rep.input_support_residual <= kTol;
    rep.input_constant_ok = rep.input_constancy_residual <= kTol;

    VectorFunction ft = plan.dft(f);
    double gscale = max_coord_norm(ft);
    double gs = gscale > 0.0 ? gscale : 1.0;
    Subgroup kperp = annihilator(f.group(), k);
    Subgroup hperp = annihilator(f.group(), h);
    rep.transform_support_residual = support_residual(ft, kperp) / gs;
    rep.transform_constancy_residual = constancy_residual(ft, hperp) / gs;
    rep.transform_supported_ok = rep.transform_support_residual <= kTol;
    rep.transform_constant_ok = rep.transform_constancy_residual <= kTol;

    rep.ok = rep.input_supported_ok && rep.input_constant_ok && rep.transform_supported_ok &&
             rep.transform_constant_ok;
    return rep;
}

} // namespace normlab
