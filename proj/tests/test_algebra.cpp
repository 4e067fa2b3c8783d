#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "fol/poly.hpp"
#include "fol/rng.hpp"

using fol::cplx;
using fol::Poly;

namespace {

const std::vector<std::string> ZW = {"z", "w"};

Poly zw_poly(std::initializer_list<std::pair<std::pair<int, int>, cplx>> terms) {
    Poly p(ZW);
    for (const auto& [e, c] : terms) p.add_term({e.first, e.second}, c);
    return p;
}

Poly random_poly(fol::Rng& rng, int deg) {
    Poly p(ZW);
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; i + j <= deg; ++j)
            p.add_term({i, j}, cplx(rng.gaussian(), rng.gaussian()));
    return p;
}

} // namespace

TEST_CASE("eval basic products and roots") {
    Poly zw = zw_poly({{{1, 1}, 1.0}});
    CHECK(std::abs(zw.eval({2.0, cplx(0, 3)}) - cplx(0, 6)) < 1e-15);

    Poly z2m1 = zw_poly({{{2, 0}, 1.0}, {{0, 0}, -1.0}});
    CHECK(std::abs(z2m1.eval({1.0, cplx(123, 4)})) < 1e-15);

    Poly cusp = zw_poly({{{0, 2}, 1.0}, {{3, 0}, -1.0}}); // w^2 - z^3
    CHECK(std::abs(cusp.eval({1.0, 1.0})) < 1e-15);

    CHECK_THROWS_WITH_AS(zw.eval({1.0}), doctest::Contains("arity"), fol::Error);
}

TEST_CASE("eval is multiplicative at random points") {
    fol::Rng rng(42);
    for (int t = 0; t < 100; ++t) {
        Poly p = random_poly(rng, 3), q = random_poly(rng, 4);
        fol::ComplexPoint x = {cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                               cplx(rng.uniform(-1, 1), rng.uniform(-1, 1))};
        cplx lhs = (p * q).eval(x);
        cplx rhs = p.eval(x) * q.eval(x);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("partial derivatives") {
    Poly p = zw_poly({{{2, 1}, 1.0}}); // z^2 w
    Poly dz = p.derivative("z");
    CHECK(dz.terms().size() == 1);
    CHECK(std::abs(dz.eval({3.0, 5.0}) - cplx(30.0)) < 1e-14); // 2zw

    Poly z3 = zw_poly({{{3, 0}, 1.0}});
    CHECK(z3.derivative("w").is_zero());

    Poly cusp = zw_poly({{{0, 2}, 1.0}, {{3, 0}, -1.0}});
    Poly dcz = cusp.derivative("z"); // -3z^2
    CHECK(std::abs(dcz.eval({2.0, 0.0}) - cplx(-12.0)) < 1e-14);

    CHECK_THROWS_AS(p.derivative("q"), fol::Error);
}

TEST_CASE("derivative agrees with central differences") {
    fol::Rng rng(7);
    const double h = 1e-6;
    for (int t = 0; t < 25; ++t) {
        Poly p = random_poly(rng, 4);
        Poly dp = p.derivative(0);
        cplx z(rng.uniform(-1, 1), rng.uniform(-1, 1));
        cplx w(rng.uniform(-1, 1), rng.uniform(-1, 1));
        cplx fd = (p.eval({z + h, w}) - p.eval({z - h, w})) / (2 * h);
        cplx ex = dp.eval({z, w});
        CHECK(std::abs(fd - ex) <= 1e-6 * (1.0 + std::abs(ex)));
    }
}

TEST_CASE("resultant: 2x2 Sylvester") {
    Poly p = zw_poly({{{1, 0}, 1.0}, {{0, 1}, -1.0}}); // z - w
    Poly q = zw_poly({{{0, 1}, 1.0}, {{0, 0}, -2.0}}); // w - 2
    auto rr = fol::resultant_eliminate(p, q, "w");
    CHECK_FALSE(rr.leading_degenerate);
    CHECK(rr.value.degree() == 1);
    // vanishes exactly at z = 2, nowhere else
    CHECK(std::abs(rr.value.eval({2.0})) < 1e-14);
    CHECK(std::abs(rr.value.eval({3.0})) > 0.5);
}

TEST_CASE("resultant of cusp pair matches cofactor-expansion oracle") {
    // Res_w(w^2 - z^3, z^2 w - 1): hand Sylvester
    //   [ 1    0   -z^3 ]
    //   [ z^2 -1    0   ]
    //   [ 0    z^2 -1   ]
    // expanded by explicit cofactors with plain Poly arithmetic.
    std::vector<std::string> Z = {"z"};
    auto zc = [&](int k, cplx c) {
        Poly t(Z);
        t.add_term({k}, c);
        return t;
    };
    Poly a = zc(0, 1.0), b = zc(0, 0.0), c = zc(3, -1.0);
    Poly d = zc(2, 1.0), e = zc(0, -1.0), f = zc(0, 0.0);
    Poly g = zc(0, 0.0), h = zc(2, 1.0), i = zc(0, -1.0);
    Poly oracle = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);

    Poly p = zw_poly({{{0, 2}, 1.0}, {{3, 0}, -1.0}});
    Poly q = zw_poly({{{2, 1}, 1.0}, {{0, 0}, -1.0}});
    auto rr = fol::resultant_eliminate(p, q, "w");

    Poly diff = rr.value - oracle;
    CHECK(diff.coeff_norm() < 1e-12);
    // oracle itself is 1 - z^7
    CHECK(std::abs(oracle.eval({cplx(1.1)}) - (1.0 - std::pow(1.1, 7))) < 1e-12);
}

TEST_CASE("resultant: x^2 + y^2 against y") {
    std::vector<std::string> XY = {"x", "y"};
    Poly p(XY), q(XY);
    p.add_term({2, 0}, 1.0);
    p.add_term({0, 2}, 1.0);
    q.add_term({0, 1}, 1.0);
    auto rr = fol::resultant_eliminate(p, q, "y");
    CHECK(std::abs(rr.value.eval({2.0}) - cplx(4.0)) < 1e-13);
    CHECK(std::abs(rr.value.eval({cplx(0, 1)}) - cplx(-1.0)) < 1e-13);
}

TEST_CASE("resultant rejects zero input") {
    Poly p = zw_poly({{{1, 1}, 1.0}});
    Poly z(ZW);
    CHECK_THROWS_WITH_AS(fol::resultant_eliminate(p, z, "w"), doctest::Contains("degenerate"),
                         fol::Error);
}

TEST_CASE("resultant vanishes at common zeros found independently") {
    fol::Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        cplx z0(rng.uniform(-1, 1), rng.uniform(-1, 1));
        cplx w0(rng.uniform(-1, 1), rng.uniform(-1, 1));
        Poly dz = zw_poly({{{1, 0}, 1.0}, {{0, 0}, -z0}});
        Poly dw = zw_poly({{{0, 1}, 1.0}, {{0, 0}, -w0}});
        Poly p = dz * random_poly(rng, 1) + dw * random_poly(rng, 1);
        Poly q = dz * random_poly(rng, 1) + dw * random_poly(rng, 1);
        if (p.degree_in(1) < 1 || q.degree_in(1) < 1) continue;
        auto polished = fol::newton_polish({p, q}, {z0 + 1e-3, w0 - 1e-3}, 1e-12);
        auto rr = fol::resultant_eliminate(p, q, "w");
        double scale = std::max(1.0, rr.value.coeff_norm());
        CHECK(std::abs(rr.value.eval({polished[0]})) < 1e-8 * scale);
    }
}

TEST_CASE("newton_polish") {
    Poly f = zw_poly({{{1, 0}, 1.0}, {{0, 0}, -1.0}});
    Poly g = zw_poly({{{0, 1}, 1.0}, {{0, 0}, -2.0}});
    auto r = fol::newton_polish({f, g}, {1.1, 1.9}, 1e-12);
    CHECK(std::abs(r[0] - 1.0) < 1e-12);
    CHECK(std::abs(r[1] - 2.0) < 1e-12);

    Poly cusp = zw_poly({{{0, 2}, 1.0}, {{3, 0}, -1.0}});
    Poly hyp = zw_poly({{{2, 1}, 1.0}, {{0, 0}, -1.0}});
    auto j = fol::newton_polish({cusp, hyp}, {0.95, 1.05}, 1e-10);
    CHECK(std::abs(j[0] - 1.0) < 1e-10);
    CHECK(std::abs(j[1] - 1.0) < 1e-10);

    Poly z2 = zw_poly({{{2, 0}, 1.0}});
    Poly w = zw_poly({{{0, 1}, 1.0}});
    CHECK_THROWS_WITH_AS(fol::newton_polish({z2, w}, {0.1, 0.0}, 1e-12),
                         doctest::Contains("jacobian-singular"), fol::Error);
}

TEST_CASE("univariate roots via companion matrix") {
    // z^7 - 1
    std::vector<cplx> coeffs(8, 0.0);
    coeffs[0] = -1.0;
    coeffs[7] = 1.0;
    auto roots = fol::univariate_roots(coeffs);
    REQUIRE(roots.size() == 7);
    for (const auto& r : roots) {
        CHECK(std::abs(std::abs(r) - 1.0) < 1e-9);
        cplx v = std::pow(r, 7) - 1.0;
        CHECK(std::abs(v) < 1e-8);
    }
}

TEST_CASE("json round trip") {
    fol::Rng rng(3);
    Poly p = random_poly(rng, 3);
    Poly q = Poly::from_json(p.to_json());
    CHECK((p - q).coeff_norm() == 0.0);
    CHECK(q.vars() == p.vars());
}

TEST_CASE("no zero coefficients are stored") {
    Poly p = zw_poly({{{1, 0}, 1.0}});
    p.add_term({1, 0}, -1.0);
    CHECK(p.is_zero());
    CHECK(p.terms().empty());
    CHECK(p.degree() == -1);
}
