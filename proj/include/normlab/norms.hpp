#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace normlab {

using cplx = std::complex<double>;

enum class NormKind { lp, weighted_lp, hilbert };

// A norm on C^d from one of three families: lp (1 <= p <= inf), weighted lp,
// or a Hilbert norm induced by a Hermitian positive-definite Gram matrix.
// The infinite exponent is a distinguished flag, never a float encoding.
//
// Duality uses the sesquilinear pairing <g, v> = sum_j conj(g_j) v_j.
class NormSpec {
public:
    static NormSpec lp(double p, std::int64_t dim);
    static NormSpec lp_inf(std::int64_t dim);
    static NormSpec weighted_lp(double p, std::vector<double> weights);
    static NormSpec weighted_lp_inf(std::vector<double> weights);
    static NormSpec hilbert_identity(std::int64_t dim);
    // gram is row-major d x d, gram[i*d+j] = G_ij; norm^2(v) = v^H G v.
    static NormSpec hilbert(std::int64_t dim, std::vector<cplx> gram);

    // Grammar: "lp:1.5:d=3", "lp:inf:d=8", "linf:d=8", "hilbert:d=4",
    // "hilbert:file=gram.json", "wlp:2:w=1,2,0.5", "wlp:inf:w=...".
    static NormSpec parse(const std::string& text);

    NormKind kind() const { return kind_; }
    std::int64_t dim() const { return dim_; }
    bool p_infinite() const { return p_inf_; }
    double p() const { return p_; } // meaningful only when !p_infinite()
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<cplx>& gram() const { return gram_; }
    bool is_hilbert() const { return kind_ == NormKind::hilbert; }

    // Canonical spec string; parsed file-based Hilbert specs keep their
    // original source text.
    const std::string& to_string() const { return source_; }

    double norm(std::span<const cplx> v) const;

    // Hilbert only: (u, v) = v^H G u (linear in u, conjugate-linear in v).
    cplx inner_product(std::span<const cplx> u, std::span<const cplx> v) const;

    // A norming functional for v != 0: dual_norm(g) = 1 and
    // Re<g, v> = norm(v). Throws on v = 0.
    std::vector<cplx> ascent_direction(std::span<const cplx> v) const;

    // Norm of a functional g in the dual space.
    double dual_norm(std::span<const cplx> g) const;

    // The dual norm as a spec in the same three families.
    NormSpec dual() const;

private:
    NormSpec() = default;
    void finalize_hilbert();
    void check_dim(std::span<const cplx> v) const;

    NormKind kind_ = NormKind::lp;
    std::int64_t dim_ = 0;
    double p_ = 2.0;
    bool p_inf_ = false;
    std::vector<double> weights_;
    std::vector<cplx> gram_;
    std::vector<cplx> chol_; // lower-triangular L with G = L L^H
    std::string source_;
};

} // namespace normlab
