#include "normlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace normlab {

namespace {

double abs2(cplx z) { return z.real() * z.real() + z.imag() * z.imag(); }

cplx phase_of(cplx z) {
    double a = std::abs(z);
    return a == 0.0 ? cplx{0.0, 0.0} : z / a;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::int64_t parse_dim_token(const std::string& tok, const std::string& full) {
    if (tok.rfind("d=", 0) != 0)
        throw std::invalid_argument("bad norm spec '" + full + "': expected d=<dim>");
    std::int64_t d = std::stoll(tok.substr(2));
    if (d < 1)
        throw std::invalid_argument("bad norm spec '" + full + "': dimension must be >= 1");
    return d;
}

} // namespace

NormSpec NormSpec::lp(double p, std::int64_t dim) {
    if (!(p >= 1.0))
        throw std::invalid_argument("lp exponent must satisfy p >= 1");
    if (dim < 1) throw std::invalid_argument("norm dimension must be >= 1");
    if (std::isinf(p)) return lp_inf(dim);
    NormSpec s;
    s.kind_ = NormKind::lp;
    s.dim_ = dim;
    s.p_ = p;
    s.source_ = "lp:" + format_double(p) + ":d=" + std::to_string(dim);
    return s;
}

NormSpec NormSpec::lp_inf(std::int64_t dim) {
    if (dim < 1) throw std::invalid_argument("norm dimension must be >= 1");
    NormSpec s;
    s.kind_ = NormKind::lp;
    s.dim_ = dim;
    s.p_inf_ = true;
    s.source_ = "linf:d=" + std::to_string(dim);
    return s;
}

NormSpec NormSpec::weighted_lp(double p, std::vector<double> weights) {
    if (!(p >= 1.0))
        throw std::invalid_argument("lp exponent must satisfy p >= 1");
    if (std::isinf(p)) return weighted_lp_inf(std::move(weights));
    if (weights.empty()) throw std::invalid_argument("norm dimension must be >= 1");
    for (double w : weights)
        if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
    NormSpec s;
    s.kind_ = NormKind::weighted_lp;
    s.dim_ = static_cast<std::int64_t>(weights.size());
    s.p_ = p;
    s.weights_ = std::move(weights);
    s.source_ = "wlp:" + format_double(p) + ":w=";
    for (std::size_t j = 0; j < s.weights_.size(); ++j) {
        if (j) s.source_ += ',';
        s.source_ += format_double(s.weights_[j]);
    }
    return s;
}

NormSpec NormSpec::weighted_lp_inf(std::vector<double> weights) {
    if (weights.empty()) throw std::invalid_argument("norm dimension must be >= 1");
    for (double w : weights)
        if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
    NormSpec s;
    s.kind_ = NormKind::weighted_lp;
    s.dim_ = static_cast<std::int64_t>(weights.size());
    s.p_inf_ = true;
    s.weights_ = std::move(weights);
    s.source_ = "wlp:inf:w=";
    for (std::size_t j = 0; j < s.weights_.size(); ++j) {
        if (j) s.source_ += ',';
        s.source_ += format_double(s.weights_[j]);
    }
    return s;
}

NormSpec NormSpec::hilbert_identity(std::int64_t dim) {
    if (dim < 1) throw std::invalid_argument("norm dimension must be >= 1");
    std::vector<cplx> g(static_cast<std::size_t>(dim * dim), cplx{0.0, 0.0});
    for (std::int64_t j = 0; j < dim; ++j) g[static_cast<std::size_t>(j * dim + j)] = 1.0;
    NormSpec s = hilbert(dim, std::move(g));
    s.source_ = "hilbert:d=" + std::to_string(dim);
    return s;
}

NormSpec NormSpec::hilbert(std::int64_t dim, std::vector<cplx> gram) {
    if (dim < 1) throw std::invalid_argument("norm dimension must be >= 1");
    if (static_cast<std::int64_t>(gram.size()) != dim * dim)
        throw std::invalid_argument("gram matrix has wrong size");
    NormSpec s;
    s.kind_ = NormKind::hilbert;
    s.dim_ = dim;
    s.gram_ = std::move(gram);
    s.source_ = "hilbert:d=" + std::to_string(dim);
    s.finalize_hilbert();
    return s;
}

void NormSpec::finalize_hilbert() {
    const std::int64_t d = dim_;
    double scale = 0.0;
    for (const cplx& z : gram_) scale = std::max(scale, std::abs(z));
    if (scale == 0.0) throw std::invalid_argument("gram matrix is zero");
    for (std::int64_t i = 0; i < d; ++i)
        for (std::int64_t j = 0; j < d; ++j) {
            cplx a = gram_[static_cast<std::size_t>(i * d + j)];
            cplx b = std::conj(gram_[static_cast<std::size_t>(j * d + i)]);
            if (std::abs(a - b) > 1e-12 * scale)
                throw std::invalid_argument("gram matrix is not Hermitian");
        }
    // Cholesky G = L L^H; failure of a positive pivot means not PD.
    chol_.assign(static_cast<std::size_t>(d * d), cplx{0.0, 0.0});
    for (std::int64_t j = 0; j < d; ++j) {
        double diag = gram_[static_cast<std::size_t>(j * d + j)].real();
        for (std::int64_t k = 0; k < j; ++k) diag -= abs2(chol_[static_cast<std::size_t>(j * d + k)]);
        if (!(diag > 1e-14 * scale))
            throw std::invalid_argument("gram matrix is not positive definite");
        double ljj = std::sqrt(diag);
        chol_[static_cast<std::size_t>(j * d + j)] = ljj;
        for (std::int64_t i = j + 1; i < d; ++i) {
            cplx sum = gram_[static_cast<std::size_t>(i * d + j)];
            for (std::int64_t k = 0; k < j; ++k)
                sum -= chol_[static_cast<std::size_t>(i * d + k)] *
                       std::conj(chol_[static_cast<std::size_t>(j * d + k)]);
            chol_[static_cast<std::size_t>(i * d + j)] = sum / ljj;
        }
    }
}

NormSpec NormSpec::parse(const std::string& text) {
    std::vector<std::string> tok;
    std::size_t start = 0;
    while (true) {
        std::size_t colon = text.find(':', start);
        if (colon == std::string::npos) {
            tok.push_back(text.substr(start));
            break;
        }
        tok.push_back(text.substr(start, colon - start));
        start = colon + 1;
    }
    if (tok.empty()) throw std::invalid_argument("empty norm spec");

    auto parse_p = [&](const std::string& s) -> double {
        if (s == "inf") return std::numeric_limits<double>::infinity();
        std::size_t used = 0;
        double p = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument("bad norm spec '" + text + "': bad exponent '" + s + "'");
        return p;
    };

    if (tok[0] == "lp") {
        if (tok.size() != 3)
            throw std::invalid_argument("bad norm spec '" + text + "': want lp:<p>:d=<dim>");
        return lp(parse_p(tok[1]), parse_dim_token(tok[2], text));
    }
    if (tok[0] == "linf") {
        if (tok.size() != 2)
            throw std::invalid_argument("bad norm spec '" + text + "': want linf:d=<dim>");
        return lp_inf(parse_dim_token(tok[1], text));
    }
    if (tok[0] == "wlp") {
        if (tok.size() != 3 || tok[2].rfind("w=", 0) != 0)
            throw std::invalid_argument("bad norm spec '" + text + "': want wlp:<p>:w=a,b,...");
        std::vector<double> w;
        std::string rest = tok[2].substr(2);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            std::size_t comma = rest.find(',', pos);
            std::string piece =
                comma == std::string::npos ? rest.substr(pos) : rest.substr(pos, comma - pos);
            if (piece.empty())
                throw std::invalid_argument("bad norm spec '" + text + "': empty weight");
            w.push_back(std::stod(piece));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return weighted_lp(parse_p(tok[1]), std::move(w));
    }
    if (tok[0] == "hilbert") {
        if (tok.size() != 2)
            throw std::invalid_argument("bad norm spec '" + text +
                                        "': want hilbert:d=<dim> or hilbert:file=<path>");
        if (tok[1].rfind("file=", 0) == 0) {
            std::string path = tok[1].substr(5);
            std::ifstream in(path);
            if (!in) throw std::invalid_argument("cannot open gram file '" + path + "'");
            nlohmann::json j;
            in >> j;
            std::int64_t d = j.at("dim").get<std::int64_t>();
            const auto& rows = j.at("gram");
            if (static_cast<std::int64_t>(rows.size()) != d)
                throw std::invalid_argument("gram file '" + path + "': wrong row count");
            std::vector<cplx> gm;
            gm.reserve(static_cast<std::size_t>(d * d));
            for (const auto& row : rows) {
                if (static_cast<std::int64_t>(row.size()) != d)
                    throw std::invalid_argument("gram file '" + path + "': wrong column count");
                for (const auto& entry : row)
                    gm.emplace_back(entry.at(0).get<double>(), entry.at(1).get<double>());
            }
            NormSpec s = hilbert(d, std::move(gm));
            s.source_ = text;
            return s;
        }
        return hilbert_identity(parse_dim_token(tok[1], text));
    }
    throw std::invalid_argument("bad norm spec '" + text + "': unknown family '" + tok[0] + "'");
}

void NormSpec::check_dim(std::span<const cplx> v) const {
    if (static_cast<std::int64_t>(v.size()) != dim_)
        throw std::invalid_argument("vector has dimension " + std::to_string(v.size()) +
                                    ", norm expects " + std::to_string(dim_));
}

double NormSpec::norm(std::span<const cplx> v) const {
    check_dim(v);
    switch (kind_) {
    case NormKind::lp: {
        if (p_inf_) {
            double m = 0.0;
            for (cplx z : v) m = std::max(m, std::abs(z));
            return m;
        }
        if (p_ == 2.0) {
            double s = 0.0;
            for (cplx z : v) s += abs2(z);
            return std::sqrt(s);
        }
        if (p_ == 1.0) {
            double s = 0.0;
            for (cplx z : v) s += std::abs(z);
            return s;
        }
        double s = 0.0;
        for (cplx z : v) s += std::pow(std::abs(z), p_);
        return std::pow(s, 1.0 / p_);
    }
    case NormKind::weighted_lp: {
        if (p_inf_) {
            double m = 0.0;
            for (std::size_t j = 0; j < v.size(); ++j) m = std::max(m, weights_[j] * std::abs(v[j]));
            return m;
        }
        double s = 0.0;
        if (p_ == 1.0) {
            for (std::size_t j = 0; j < v.size(); ++j) s += weights_[j] * std::abs(v[j]);
            return s;
        }
        for (std::size_t j = 0; j < v.size(); ++j) s += weights_[j] * std::pow(std::abs(v[j]), p_);
        return std::pow(s, 1.0 / p_);
    }
    case NormKind::hilbert: {
        // norm^2 = v^H G v = |L^H v|^2.
        const std::int64_t d = dim_;
        double s = 0.0;
        for (std::int64_t i = 0; i < d; ++i) {
            cplx y{0.0, 0.0};
            for (std::int64_t j = i; j < d; ++j)
                y += std::conj(chol_[static_cast<std::size_t>(j * d + i)]) * v[static_cast<std::size_t>(j)];
            s += abs2(y);
        }
        return std::sqrt(s);
    }
    }
    return 0.0;
}

cplx NormSpec::inner_product(std::span<const cplx> u, std::span<const cplx> v) const {
    if (kind_ != NormKind::hilbert)
        throw std::invalid_argument("inner_product requires a Hilbert norm");
    check_dim(u);
    check_dim(v);
    const std::int64_t d = dim_;
    cplx s{0.0, 0.0};
    for (std::int64_t i = 0; i < d; ++i) {
        cplx gu{0.0, 0.0};
        for (std::int64_t j = 0; j < d; ++j)
            gu += gram_[static_cast<std::size_t>(i * d + j)] * u[static_cast<std::size_t>(j)];
        s += std::conj(v[static_cast<std::size_t>(i)]) * gu;
    }
    return s;
}

std::vector<cplx> NormSpec::ascent_direction(std::span<const cplx> v) const {
    check_dim(v);
    double nv = norm(v);
    if (nv == 0.0)
        throw std::invalid_argument("ascent_direction undefined at the zero vector");
    std::vector<cplx> g(v.size(), cplx{0.0, 0.0});
    switch (kind_) {
    case NormKind::lp: {
        if (p_inf_) {
            double m = 0.0;
            for (cplx z : v) m = std::max(m, std::abs(z));
            std::size_t ties = 0;
            for (cplx z : v)
                if (std::abs(z) == m) ++ties;
            for (std::size_t j = 0; j < v.size(); ++j)
                if (std::abs(v[j]) == m) g[j] = phase_of(v[j]) / static_cast<double>(ties);
            return g;
        }
        if (p_ == 1.0) {
            for (std::size_t j = 0; j < v.size(); ++j) g[j] = phase_of(v[j]);
            return g;
        }
        for (std::size_t j = 0; j < v.size(); ++j) {
            double a = std::abs(v[j]);
            if (a > 0.0) g[j] = phase_of(v[j]) * std::pow(a / nv, p_ - 1.0);
        }
        return g;
    }
    case NormKind::weighted_lp: {
        if (p_inf_) {
            double m = 0.0;
            for (std::size_t j = 0; j < v.size(); ++j) m = std::max(m, weights_[j] * std::abs(v[j]));
            std::size_t ties = 0;
            for (std::size_t j = 0; j < v.size(); ++j)
                if (weights_[j] * std::abs(v[j]) == m) ++ties;
            for (std::size_t j = 0; j < v.size(); ++j)
                if (weights_[j] * std::abs(v[j]) == m)
                    g[j] = phase_of(v[j]) * weights_[j] / static_cast<double>(ties);
            return g;
        }
        if (p_ == 1.0) {
            for (std::size_t j = 0; j < v.size(); ++j)
                g[j] = phase_of(v[j]) * weights_[j];
            return g;
        }
        for (std::size_t j = 0; j < v.size(); ++j) {
            double a = std::abs(v[j]);
            if (a > 0.0) g[j] = phase_of(v[j]) * weights_[j] * std::pow(a / nv, p_ - 1.0);
        }
        return g;
    }
    case NormKind::hilbert: {
        const std::int64_t d = dim_;
        for (std::int64_t i = 0; i < d; ++i) {
            cplx gv{0.0, 0.0};
            for (std::int64_t j = 0; j < d; ++j)
                gv += gram_[static_cast<std::size_t>(i * d + j)] * v[static_cast<std::size_t>(j)];
            g[static_cast<std::size_t>(i)] = gv / nv;
        }
        return g;
    }
    }
    return g;
}

double NormSpec::dual_norm(std::span<const cplx> g) const {
    check_dim(g);
    switch (kind_) {
    case NormKind::lp: {
        if (p_inf_) {
            double s = 0.0;
            for (cplx z : g) s += std::abs(z);
            return s;
        }
        if (p_ == 1.0) {
            double m = 0.0;
            for (cplx z : g) m = std::max(m, std::abs(z));
            return m;
        }
        double q = p_ / (p_ - 1.0);
        if (p_ == 2.0) {
            double s = 0.0;
            for (cplx z : g) s += abs2(z);
            return std::sqrt(s);
        }
        double s = 0.0;
        for (cplx z : g) s += std::pow(std::abs(z), q);
        return std::pow(s, 1.0 / q);
    }
    case NormKind::weighted_lp: {
        if (p_inf_) {
            double s = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j) s += std::abs(g[j]) / weights_[j];
            return s;
        }
        if (p_ == 1.0) {
            double m = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j) m = std::max(m, std::abs(g[j]) / weights_[j]);
            return m;
        }
        double q = p_ / (p_ - 1.0);
        double s = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j)
            s += std::pow(weights_[j], 1.0 - q) * std::pow(std::abs(g[j]), q);
        return std::pow(s, 1.0 / q);
    }
    case NormKind::hilbert: {
        // dual_norm^2 = g^H G^{-1} g = |L^{-1} g|^2 (forward substitution).
        const std::int64_t d = dim_;
        std::vector<cplx> y(g.begin(), g.end());
        for (std::int64_t i = 0; i < d; ++i) {
            cplx s = y[static_cast<std::size_t>(i)];
            for (std::int64_t k = 0; k < i; ++k)
                s -= chol_[static_cast<std::size_t>(i * d + k)] * y[static_cast<std::size_t>(k)];
            y[static_cast<std::size_t>(i)] = s / chol_[static_cast<std::size_t>(i * d + i)];
        }
        double s = 0.0;
        for (cplx z : y) s += abs2(z);
        return std::sqrt(s);
    }
    }
    return 0.0;
}

NormSpec NormSpec::dual() const {
    switch (kind_) {
    case NormKind::lp:
        if (p_inf_) return lp(1.0, dim_);
        if (p_ == 1.0) return lp_inf(dim_);
        return lp(p_ / (p_ - 1.0), dim_);
    case NormKind::weighted_lp: {
        std::vector<double> w(weights_.size());
        if (p_inf_) {
            for (std::size_t j = 0; j < w.size(); ++j) w[j] = 1.0 / weights_[j];
            return weighted_lp(1.0, std::move(w));
        }
        if (p_ == 1.0) {
            for (std::size_t j = 0; j < w.size(); ++j) w[j] = 1.0 / weights_[j];
            return weighted_lp_inf(std::move(w));
        }
        double q = p_ / (p_ - 1.0);
        for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::pow(weights_[j], 1.0 - q);
        return weighted_lp(q, std::move(w));
    }
    case NormKind::hilbert: {
        // Dual gram is G^{-1}, via L L^H X = I column by column.
        const std::int64_t d = dim_;
        std::vector<cplx> inv(static_cast<std::size_t>(d * d), cplx{0.0, 0.0});
        for (std::int64_t c = 0; c < d; ++c) {
            std::vector<cplx> y(static_cast<std::size_t>(d), cplx{0.0, 0.0});
            y[static_cast<std::size_t>(c)] = 1.0;
            for (std::int64_t i = 0; i < d; ++i) {
                cplx s = y[static_cast<std::size_t>(i)];
                for (std::int64_t k = 0; k < i; ++k)
                    s -= chol_[static_cast<std::size_t>(i * d + k)] * y[static_cast<std::size_t>(k)];
                y[static_cast<std::size_t>(i)] = s / chol_[static_cast<std::size_t>(i * d + i)];
            }
            for (std::int64_t i = d; i-- > 0;) {
                cplx s = y[static_cast<std::size_t>(i)];
                for (std::int64_t k = i + 1; k < d; ++k)
                    s -= std::conj(chol_[static_cast<std::size_t>(k * d + i)]) *
                         y[static_cast<std::size_t>(k)];
                y[static_cast<std::size_t>(i)] = s / chol_[static_cast<std::size_t>(i * d + i)];
            }
            for (std::int64_t i = 0; i < d; ++i) inv[static_cast<std::size_t>(i * d + c)] = y[static_cast<std::size_t>(i)];
        }
        return hilbert(d, std::move(inv));
    }
    }
    throw std::logic_error("unreachable");
}

} // namespace normlab
