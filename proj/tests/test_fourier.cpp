#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "normlab/fourier.hpp"
#include "normlab/rng.hpp"

using namespace normlab;

namespace {

VectorFunction random_function(Rng& rng, const FiniteAbelianGroup& g, std::int64_t d) {
    VectorFunction f(g, d);
    for (cplx& z : f.values()) z = rng.complex_gaussian();
    return f;
}

double max_pointwise_diff(const VectorFunction& a, const VectorFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

double max_abs(const VectorFunction& a) {
    double m = 0.0;
    for (const cplx& z : a.values()) m = std::max(m, std::abs(z));
    return m;
}

} // namespace

TEST_CASE("dft oracles") {
    // delta_0 tensor x on Z/2 -> constant x / sqrt(2).
    FiniteAbelianGroup z2({2});
    TransformPlan plan2(z2);
    VectorFunction f(z2, 2);
    f.value(0)[0] = cplx{1.0, 0.0};
    f.value(0)[1] = cplx{0.0, 2.0};
    VectorFunction fh = plan2.dft(f);
    double r = 1.0 / std::sqrt(2.0);
    for (std::int64_t xi = 0; xi < 2; ++xi) {
        CHECK(std::abs(fh.value(xi)[0] - cplx{r, 0.0}) < 1e-14);
        CHECK(std::abs(fh.value(xi)[1] - cplx{0.0, 2.0 * r}) < 1e-14);
    }

    // Constant x on Z/6 -> sqrt(6) x at xi = 0, zero elsewhere.
    FiniteAbelianGroup z6({6});
    TransformPlan plan6(z6);
    VectorFunction c(z6, 1);
    for (std::int64_t t = 0; t < 6; ++t) c.value(t)[0] = cplx{2.0, -1.0};
    VectorFunction ch = plan6.dft(c);
    CHECK(std::abs(ch.value(0)[0] - std::sqrt(6.0) * cplx{2.0, -1.0}) < 1e-13);
    for (std::int64_t xi = 1; xi < 6; ++xi) CHECK(std::abs(ch.value(xi)[0]) < 1e-13);

    // delta_1 on Z/4 -> (1/2) i^xi.
    FiniteAbelianGroup z4({4});
    TransformPlan plan4(z4);
    VectorFunction d1(z4, 1);
    d1.value(1)[0] = cplx{1.0, 0.0};
    VectorFunction dh = plan4.dft(d1);
    cplx i{0.0, 1.0}, w{1.0, 0.0};
    for (std::int64_t xi = 0; xi < 4; ++xi) {
        CHECK(std::abs(dh.value(xi)[0] - 0.5 * w) < 1e-14);
        w *= i;
    }
}

TEST_CASE("group mismatch throws") {
    TransformPlan plan(FiniteAbelianGroup({4}));
    VectorFunction f(FiniteAbelianGroup({2, 2}), 1);
    CHECK_THROWS_AS(plan.dft(f), std::invalid_argument);
    CHECK_THROWS_AS(plan.idft(f), std::invalid_argument);
}

TEST_CASE("inversion and double-transform identities") {
    Rng rng(101);
    for (const auto& orders :
         {std::vector<std::int64_t>{6}, {4, 9}, {2, 2, 2, 2, 2, 2, 2, 2, 2, 2}}) {
        FiniteAbelianGroup g(orders);
        TransformPlan plan(g);
        for (int it = 0; it < 10; ++it) {
            VectorFunction f = random_function(rng, g, 3);
            double scale = max_abs(f);
            VectorFunction back = plan.idft(plan.dft(f));
            CHECK(max_pointwise_diff(back, f) <= 1e-10 * scale);
            VectorFunction twice = plan.dft(plan.dft(f));
            CHECK(max_pointwise_diff(twice, reflect(f)) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("reflect oracles") {
    FiniteAbelianGroup z4({4});
    VectorFunction d1(z4, 1);
    d1.value(1)[0] = cplx{1.0, 0.0};
    VectorFunction r = reflect(d1);
    CHECK(std::abs(r.value(3)[0] - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(r.value(1)[0]) < 1e-15);

    // Even function is fixed.
    VectorFunction even(z4, 1);
    even.value(0)[0] = cplx{1.0, 0.0};
    even.value(1)[0] = cplx{2.0, 0.0};
    even.value(2)[0] = cplx{3.0, 0.0};
    even.value(3)[0] = cplx{2.0, 0.0};
    CHECK(max_pointwise_diff(reflect(even), even) == 0.0);

    // Involution on a random function over a product group.
    Rng rng(5);
    FiniteAbelianGroup g({3, 4});
    VectorFunction f = random_function(rng, g, 2);
    CHECK(max_pointwise_diff(reflect(reflect(f)), f) == 0.0);
}

TEST_CASE("naive and fast strategies agree") {
    Rng rng(202);
    for (const auto& orders : {std::vector<std::int64_t>{1}, {5}, {8}, {9}, {12}, {16},
                               {2, 2}, {4, 9}, {2, 3, 5}, {7, 7}}) {
        FiniteAbelianGroup g(orders);
        TransformPlan fast(g, TransformStrategy::fast);
        TransformPlan naive(g, TransformStrategy::naive);
        for (int it = 0; it < 5; ++it) {
            VectorFunction f = random_function(rng, g, 2);
            double scale = max_abs(f);
            CHECK(max_pointwise_diff(fast.dft(f), naive.dft(f)) <= 1e-10 * scale);
            CHECK(max_pointwise_diff(fast.idft(f), naive.idft(f)) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("parseval for hilbert norms") {
    Rng rng(303);
    NormSpec id4 = NormSpec::hilbert_identity(4);
    // Random Gram: A A^H + I/2, Hermitian-symmetrized.
    std::vector<cplx> a(16), gram(16, cplx{0.0, 0.0});
    for (cplx& z : a) z = rng.complex_gaussian();
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            cplx acc{0.0, 0.0};
            for (std::size_t k = 0; k < 4; ++k) acc += a[i * 4 + k] * std::conj(a[j * 4 + k]);
            gram[i * 4 + j] = acc;
        }
    for (std::size_t i = 0; i < 4; ++i) gram[i * 4 + i] += 0.5;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            cplx m = 0.5 * (gram[i * 4 + j] + std::conj(gram[j * 4 + i]));
            gram[i * 4 + j] = m;
            gram[j * 4 + i] = std::conj(m);
        }
    NormSpec hg = NormSpec::hilbert(4, gram);

    for (const auto& orders : {std::vector<std::int64_t>{12}, {4, 9}, {64}}) {
        FiniteAbelianGroup g(orders);
        TransformPlan plan(g);
        for (int it = 0; it < 10; ++it) {
            VectorFunction f = random_function(rng, g, 4);
            for (const NormSpec* spec : {&id4, &hg}) {
                double nf = l2_norm(f, *spec);
                double nFf = l2_norm(plan.dft(f), *spec);
                CHECK(std::abs(nFf / nf - 1.0) <= 1e-10);
            }
        }
    }
}

TEST_CASE("universal sqrt|G| bound for arbitrary norms") {
    Rng rng(404);
    for (const auto& orders : {std::vector<std::int64_t>{8}, {3, 4}, {2, 2, 3}}) {
        FiniteAbelianGroup g(orders);
        TransformPlan plan(g);
        double bound = std::sqrt(static_cast<double>(g.cardinality()));
        for (const NormSpec& spec :
             {NormSpec::lp(1.0, 3), NormSpec::lp(1.5, 3), NormSpec::lp_inf(3),
              NormSpec::weighted_lp(1.0, {2.0, 1.0, 0.5})}) {
            for (int it = 0; it < 20; ++it) {
                VectorFunction f = random_function(rng, g, 3);
                CHECK(l2_norm(plan.dft(f), spec) <= bound * l2_norm(f, spec) * (1.0 + 1e-10));
            }
        }
    }
}

TEST_CASE("linearity") {
    Rng rng(505);
    FiniteAbelianGroup g({3, 4});
    TransformPlan plan(g);
    for (int it = 0; it < 20; ++it) {
        VectorFunction f = random_function(rng, g, 2);
        VectorFunction h = random_function(rng, g, 2);
        cplx alpha = rng.complex_gaussian();
        VectorFunction comb(g, 2);
        for (std::size_t i = 0; i < comb.values().size(); ++i)
            comb.values()[i] = alpha * f.values()[i] + h.values()[i];
        VectorFunction lhs = plan.dft(comb);
        VectorFunction fh = plan.dft(f), hh = plan.dft(h);
        double m = 0.0;
        for (std::size_t i = 0; i < lhs.values().size(); ++i)
            m = std::max(m, std::abs(lhs.values()[i] - (alpha * fh.values()[i] + hh.values()[i])));
        CHECK(m <= 1e-11 * std::max(1.0, max_abs(lhs)));
    }
}

TEST_CASE("tensor embedding: isometry and commutation") {
    Rng rng(606);
    FiniteAbelianGroup g({3}), g2({4});
    TransformPlan plan_g(g), plan_g2(g2), plan_prod(direct_product(g, g2));

    // Unit-norm scalar psi on G2 under the self-dual weight.
    std::vector<cplx> psi(4);
    for (cplx& z : psi) z = rng.complex_gaussian();
    double n = scalar_l2_norm(g2, psi);
    for (cplx& z : psi) z /= n;

    for (const NormSpec& spec :
         {NormSpec::lp(2.0, 2), NormSpec::lp(1.5, 2), NormSpec::hilbert_identity(2)}) {
        for (int it = 0; it < 10; ++it) {
            VectorFunction f = random_function(rng, g, 2);
            VectorFunction jf = tensor_embedding(f, g2, psi);
            CHECK(std::abs(l2_norm(jf, spec) - l2_norm(f, spec)) <=
                  1e-10 * std::max(1.0, l2_norm(f, spec)));
        }
    }

    // Commutation: F(Jf) equals (Ff) tensor (F psi).
    VectorFunction psi_fn(g2, 1, std::vector<cplx>(psi.begin(), psi.end()));
    VectorFunction psi_hat = plan_g2.dft(psi_fn);
    for (int it = 0; it < 10; ++it) {
        VectorFunction f = random_function(rng, g, 2);
        VectorFunction lhs = plan_prod.dft(tensor_embedding(f, g2, psi));
        VectorFunction fh = plan_g.dft(f);
        VectorFunction rhs = tensor_embedding(fh, g2, psi_hat.values());
        CHECK(max_pointwise_diff(lhs, rhs) <= 1e-10 * std::max(1.0, max_abs(lhs)));
    }

    // Non-unit psi rejected.
    std::vector<cplx> bad(psi);
    for (cplx& z : bad) z *= 2.0;
    VectorFunction f = random_function(rng, g, 2);
    CHECK_THROWS_AS(tensor_embedding(f, g2, bad), std::invalid_argument);
}

TEST_CASE("support and coset duality report") {
    FiniteAbelianGroup z4({4});
    TransformPlan plan(z4);

    // f = indicator(H) tensor x with H = {0,2}: transform supported on
    // H^perp = {0,2} and constant on its cosets.
    Subgroup h(z4, {0, 2});
    VectorFunction f(z4, 2);
    for (std::int64_t t : h.elements()) {
        f.value(t)[0] = cplx{1.0, 0.0};
        f.value(t)[1] = cplx{0.0, 3.0};
    }
    SupportCosetReport rep = support_coset_check(plan, f, h, h);
    CHECK(rep.ok);
    CHECK(rep.input_supported_ok);
    CHECK(rep.input_constant_ok);
    CHECK(rep.transform_supported_ok);
    CHECK(rep.transform_constant_ok);
    CHECK(rep.transform_support_residual <= 1e-10);
    CHECK(rep.transform_constancy_residual <= 1e-10);
    // Direct support check of the claim itself.
    VectorFunction fh = plan.dft(f);
    CHECK(std::abs(fh.value(1)[0]) < 1e-12);
    CHECK(std::abs(fh.value(3)[0]) < 1e-12);

    // H = K = G, constant f: transform is a point mass at 0.
    VectorFunction c(z4, 1);
    for (std::int64_t t = 0; t < 4; ++t) c.value(t)[0] = cplx{1.0, -1.0};
    SupportCosetReport rc = support_coset_check(plan, c, Subgroup::full(z4), Subgroup::full(z4));
    CHECK(rc.ok);

    // H = G, K = {0}: no constraint beyond trivial ones -> holds for any f.
    Rng rng(9);
    VectorFunction any(z4, 1);
    for (cplx& z : any.values()) z = rng.complex_gaussian();
    SupportCosetReport ra =
        support_coset_check(plan, any, Subgroup::full(z4), Subgroup::trivial(z4));
    CHECK(ra.ok);

    // Violated precondition is reported, not thrown.
    VectorFunction off(z4, 1);
    off.value(1)[0] = cplx{1.0, 0.0};
    SupportCosetReport rv = support_coset_check(plan, off, h, h);
    CHECK(!rv.input_supported_ok);
    CHECK(rv.input_support_residual > 0.1);
    CHECK(!rv.ok);
}
