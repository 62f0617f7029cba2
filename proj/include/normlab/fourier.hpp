#pragma once

#include "normlab/group.hpp"
#include "normlab/l2.hpp"

namespace normlab {

enum class TransformStrategy { naive, fast };

// Fourier transform on L2(G, X) with the self-dual normalization:
//   (F f)(xi) = |G|^{-1/2} sum_t <xi, t> f(t)
//   (F^{-1} g)(t) = |G|^{-1/2} sum_xi conj(<xi, t>) g(xi)
// so F is unitary when X is Hilbert and F.F is the reflection f(-t).
//
// The fast path runs a mixed-radix Cooley-Tukey pass per cyclic factor
// (prime factors split off smallest first, odd primes handled by the naive
// base case); the naive path is the quadratic double loop, kept as an
// oracle. Unit roots come from per-axis tables indexed by exact residues.
class TransformPlan {
public:
    explicit TransformPlan(FiniteAbelianGroup group,
                           TransformStrategy strategy = TransformStrategy::fast);

    const FiniteAbelianGroup& group() const { return group_; }
    TransformStrategy strategy() const { return strategy_; }

    VectorFunction dft(const VectorFunction& f) const;
    VectorFunction idft(const VectorFunction& f) const;

private:
    VectorFunction apply(const VectorFunction& f, int sign) const;
    void fft_axis(std::vector<cplx>& data, std::size_t axis, std::int64_t dim, int sign) const;
    void fft_rec(const cplx* in, std::int64_t in_stride, cplx* out, cplx* scratch, std::int64_t n,
                 std::int64_t sigma, const std::int64_t* factor, const std::vector<cplx>& table,
                 std::int64_t table_n, int sign) const;

    FiniteAbelianGroup group_;
    TransformStrategy strategy_;
    std::vector<std::vector<cplx>> roots_;           // roots_[axis][k] = exp(2 pi i k / n_axis)
    std::vector<std::vector<std::int64_t>> factors_; // prime factors of each axis order, ascending
};

// (reflect f)(t) = f(-t).
VectorFunction reflect(const VectorFunction& f);

// J: L2(G, X) -> L2(G x G2, X), f |-> f (x) psi for a unit-norm scalar psi
// on G2. Isometric, and intertwines the transforms: F(Jf) = (Ff) (x) (F psi).
VectorFunction tensor_embedding(const VectorFunction& f, const FiniteAbelianGroup& g2,
                                std::span<const cplx> psi);

// For f supported in a subgroup H and constant on cosets of a subgroup K,
// the transform is supported in K^perp and constant on cosets of H^perp.
// Preconditions are measured and reported rather than thrown.
struct SupportCosetReport {
    double input_support_residual = 0.0;
    double input_constancy_residual = 0.0;
    bool input_supported_ok = true;
    bool input_constant_ok = true;
    double transform_support_residual = 0.0;
    double transform_constancy_residual = 0.0;
    bool transform_supported_ok = true;
    bool transform_constant_ok = true;
    bool ok = true;
};

SupportCosetReport support_coset_check(const TransformPlan& plan, const VectorFunction& f,
                                       const Subgroup& h, const Subgroup& k);

} // namespace normlab
