#pragma once

#include <span>
#include <utility>
#include <vector>

#include "normlab/group.hpp"
#include "normlab/norms.hpp"

namespace normlab {

// A function G -> C^d stored densely: values()[t * dim + j] is coordinate j
// at the flat group index t.
class VectorFunction {
public:
    VectorFunction(FiniteAbelianGroup group, std::int64_t dim);
    VectorFunction(FiniteAbelianGroup group, std::int64_t dim, std::vector<cplx> values);

    const FiniteAbelianGroup& group() const { return group_; }
    std::int64_t dim() const { return dim_; }
    std::int64_t size() const { return group_.cardinality(); }

    std::span<const cplx> value(std::int64_t t) const {
        return {values_.data() + t * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<cplx> value(std::int64_t t) {
        return {values_.data() + t * dim_, static_cast<std::size_t>(dim_)};
    }
    const std::vector<cplx>& values() const { return values_; }
    std::vector<cplx>& values() { return values_; }

private:
    FiniteAbelianGroup group_;
    std::int64_t dim_;
    std::vector<cplx> values_;
};

// L2(G, X) norm: sqrt( w * sum_t norm_X(f(t))^2 ) with the self-dual point
// weight w = |G|^{-1/2}.
double l2_norm(const VectorFunction& f, const NormSpec& spec);

// Same for scalar functions with |.|.
double scalar_l2_norm(const FiniteAbelianGroup& g, std::span<const cplx> values);

// Pointwise Hilbert-space inner product integrated with the self-dual
// weight; requires a Hilbert spec.
cplx pointwise_inner_l2(const VectorFunction& f, const VectorFunction& g, const NormSpec& spec);

// Piecewise-constant function: each piece is (points, value); pieces must
// not overlap; unset points are zero.
VectorFunction simple_function(
    const FiniteAbelianGroup& g, std::int64_t dim,
    const std::vector<std::pair<std::vector<std::int64_t>, std::vector<cplx>>>& pieces);

// Elementary tensor phi (x) x of a scalar function and a vector.
struct SimpleTensor {
    FiniteAbelianGroup group;
    std::vector<cplx> scalar_part; // one value per flat group index
    std::vector<cplx> vector_part;

    VectorFunction materialize() const;
};

} // namespace normlab
