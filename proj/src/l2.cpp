#include "normlab/l2.hpp"

#include <stdexcept>

namespace normlab {

VectorFunction::VectorFunction(FiniteAbelianGroup group, std::int64_t dim)
    : group_(std::move(group)), dim_(dim) {
    if (dim_ < 1) throw std::invalid_argument("function dimension must be >= 1");
    values_.assign(static_cast<std::size_t>(group_.cardinality() * dim_), cplx{0.0, 0.0});
}

VectorFunction::VectorFunction(FiniteAbelianGroup group, std::int64_t dim, std::vector<cplx> values)
    : group_(std::move(group)), dim_(dim), values_(std::move(values)) {
    if (dim_ < 1) throw std::invalid_argument("function dimension must be >= 1");
    if (static_cast<std::int64_t>(values_.size()) != group_.cardinality() * dim_)
        throw std::invalid_argument("value array has wrong size");
}

double l2_norm(const VectorFunction& f, const NormSpec& spec) {
    if (spec.dim() != f.dim())
        throw std::invalid_argument("norm dimension does not match function dimension");
    double acc = 0.0;
    for (std::int64_t t = 0; t < f.size(); ++t) {
        double n = spec.norm(f.value(t));
        acc += n * n;
    }
    return std::sqrt(f.group().haar_point_weight() * acc);
}

double scalar_l2_norm(const FiniteAbelianGroup& g, std::span<const cplx> values) {
    if (static_cast<std::int64_t>(values.size()) != g.cardinality())
        throw std::invalid_argument("value array has wrong size");
    double acc = 0.0;
    for (cplx z : values) acc += z.real() * z.real() + z.imag() * z.imag();
    return std::sqrt(g.haar_point_weight() * acc);
}

cplx pointwise_inner_l2(const VectorFunction& f, const VectorFunction& g, const NormSpec& spec) {
    if (!f.group().same_shape(g.group()))
        throw std::invalid_argument("functions live on different groups");
    if (f.dim() != g.dim() || spec.dim() != f.dim())
        throw std::invalid_argument("dimension mismatch");
    cplx acc{0.0, 0.0};
    for (std::int64_t t = 0; t < f.size(); ++t)
        acc += spec.inner_product(f.value(t), g.value(t));
    return f.group().haar_point_weight() * acc;
}

VectorFunction simple_function(
    const FiniteAbelianGroup& g, std::int64_t dim,
    const std::vector<std::pair<std::vector<std::int64_t>, std::vector<cplx>>>& pieces) {
    VectorFunction f(g, dim);
    std::vector<bool> used(static_cast<std::size_t>(g.cardinality()), false);
    for (const auto& [points, x] : pieces) {
        if (static_cast<std::int64_t>(x.size()) != dim)
            throw std::invalid_argument("piece value has wrong dimension");
        for (std::int64_t t : points) {
            if (t < 0 || t >= g.cardinality())
                throw std::invalid_argument("piece point out of range");
            if (used[static_cast<std::size_t>(t)])
                throw std::invalid_argument("pieces overlap at point " + std::to_string(t));
            used[static_cast<std::size_t>(t)] = true;
            auto dst = f.value(t);
            for (std::int64_t j = 0; j < dim; ++j) dst[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)];
        }
    }
    return f;
}

VectorFunction SimpleTensor::materialize() const {
    if (static_cast<std::int64_t>(scalar_part.size()) != group.cardinality())
        throw std::invalid_argument("scalar part has wrong size");
    std::int64_t d = static_cast<std::int64_t>(vector_part.size());
    if (d < 1) throw std::invalid_argument("vector part is empty");
    VectorFunction f(group, d);
    for (std::int64_t t = 0; t < group.cardinality(); ++t) {
        auto dst = f.value(t);
        for (std::int64_t j = 0; j < d; ++j)
            dst[static_cast<std::size_t>(j)] = scalar_part[static_cast<std::size_t>(t)] *
                                               vector_part[static_cast<std::size_t>(j)];
    }
    return f;
}

} // namespace normlab
