#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "fol/leafgeom.hpp"
#include "fol/rng.hpp"

using fol::cplx;
using fol::kPi;
using fol::kTwoPi;
using fol::LeafModel;
using fol::SectorChart;

namespace {
const cplx I(0.0, 1.0);
}

TEST_CASE("parametrization at anchor points") {
    LeafModel m(I);
    auto p = m.at(1.0, 0.0);
    CHECK(std::abs(p.z - 1.0) < 1e-15);
    CHECK(std::abs(p.w - 1.0) < 1e-15);
    CHECK(p.plaque_n == 0);

    auto q = m.at(1.0, kTwoPi);
    CHECK(std::abs(q.z - 1.0) < 1e-13);
    CHECK(std::abs(q.w - std::exp(-kTwoPi)) < 1e-15);
    CHECK(std::abs(std::abs(q.w) - 1.8674427317079888e-3) < 1e-12);
    CHECK(q.plaque_n == 1);

    auto r = m.at(std::exp(-kPi), 0.0);
    CHECK(std::abs(r.z - cplx(-1.0)) < 1e-13);
    CHECK(std::abs(r.w - 1.0) < 1e-13);
}

TEST_CASE("modulus identities and tangency on random samples") {
    fol::Rng rng(2024);
    for (cplx lambda : {I, cplx(-1.0, 1.0), cplx(0.5, -0.5)}) {
        LeafModel m(lambda);
        double a = lambda.real(), b = lambda.imag();
        for (int t = 0; t < 2000; ++t) {
            cplx alpha = std::exp(cplx(rng.uniform(-kTwoPi * std::abs(b), 0.0),
                                       rng.uniform(0.0, kTwoPi)));
            cplx zeta(rng.uniform(-20.0, 20.0), rng.uniform(-5.0, 20.0));
            auto p = m.at(alpha, zeta);
            double ez = std::exp(-p.v());
            double ew = std::exp(-b * p.u() - a * p.v());
            CHECK(std::abs(std::abs(p.z) - ez) <= 1e-12 * ez);
            CHECK(std::abs(std::abs(p.w) - ew) <= 1e-12 * ew);
            CHECK(m.tangency_residual(alpha, zeta) < 1e-12);
        }
    }
}

TEST_CASE("wrong w-branch leaves a visible tangency residual") {
    LeafModel m(I);
    cplx alpha = 0.7, zeta(1.3, 0.4);
    cplx tau = zeta + std::log(std::abs(alpha)) / m.b();
    cplx z = std::exp(I * tau);
    cplx wbad = alpha * std::exp(I * std::conj(m.lambda()) * tau);
    cplx dz = I * z;
    cplx dwbad = I * std::conj(m.lambda()) * wbad;
    double res = std::abs(z * dwbad - m.lambda() * wbad * dz) /
                 (std::abs(z) * std::abs(wbad) * (1.0 + std::abs(m.lambda())));
    CHECK(res > 0.1);
}

TEST_CASE("sector exponents") {
    auto s1 = fol::sector_of(I);
    CHECK(s1.theta_max() == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(s1.gamma() == 2.0);

    auto s2 = fol::sector_of(cplx(-1.0, 1.0));
    CHECK(s2.theta_max() == doctest::Approx(kPi / 4).epsilon(1e-14));
    CHECK(std::abs(s2.gamma() - 4.0) < 1e-12);

    auto s3 = fol::sector_of(cplx(1.0, 2.0));
    double want_theta = kPi - std::atan(2.0);
    CHECK(std::abs(s3.theta_max() - want_theta) < 1e-14);
    CHECK(std::abs(s3.gamma() - kPi / want_theta) < 1e-12);

    CHECK_THROWS_WITH_AS(fol::sector_of(cplx(0.5, -0.5)), doctest::Contains("not-normalized"),
                         fol::Error);
}

TEST_CASE("gamma exceeds 1 for random normalized ratios") {
    fol::Rng rng(5);
    int count = 0;
    while (count < 1000) {
        cplx lam(rng.uniform(-3, 3), rng.uniform(1e-3, 3));
        auto s = fol::sector_of(lam);
        CHECK(s.gamma() > 1.0);
        CHECK(s.theta_max() > 0.0);
        CHECK(s.theta_max() < kPi);
        ++count;
    }
}

TEST_CASE("to_halfplane: powers, edges, injectivity") {
    auto s = fol::sector_of(I); // gamma = 2
    auto uv = s.to_halfplane(std::exp(I * (kPi / 4)));
    CHECK(std::abs(uv[0]) < 1e-14);
    CHECK(std::abs(uv[1] - 1.0) < 1e-14);

    auto edge = s.to_halfplane(I);
    CHECK(std::abs(edge[0] + 1.0) < 1e-14);
    CHECK(std::abs(edge[1]) < 1e-12);

    auto s4 = fol::sector_of(cplx(-1.0, 1.0)); // gamma = 4
    auto uv4 = s4.to_halfplane(2.0 * std::exp(I * (kPi / 8)));
    CHECK(std::abs(uv4[0]) < 1e-12);
    CHECK(std::abs(uv4[1] - 16.0) < 1e-10);

    CHECK_THROWS_WITH_AS(s.to_halfplane(cplx(0.5, -0.5)), doctest::Contains("outside-sector"),
                         fol::Error);

    // edges map to V ~ 0; interior grid is injective
    fol::Rng rng(8);
    std::vector<std::array<double, 2>> seen;
    for (int i = 0; i < 400; ++i) {
        double rho = rng.uniform(0.1, 3.0);
        double th = rng.uniform(0.01, s.theta_max() - 0.01);
        auto p = s.to_halfplane(rho * std::exp(I * th));
        for (const auto& q : seen) {
            double d = std::hypot(p[0] - q[0], p[1] - q[1]);
            CHECK(d > 1e-9);
        }
        seen.push_back(p);
    }
    for (double rho : {0.3, 1.0, 2.5}) {
        CHECK(std::abs(s.to_halfplane(cplx(rho, 0.0))[1]) < 1e-12);
        CHECK(std::abs(s.to_halfplane(rho * std::exp(I * s.theta_max()))[1]) < 1e-12);
    }
}

TEST_CASE("holonomy contraction and composition") {
    LeafModel m(I); // b = 1
    cplx w = 0.999;
    cplx w1 = m.holonomy_step(w);
    CHECK(std::abs(std::abs(w1) / std::abs(w) - std::exp(-kTwoPi)) < 1e-14);
    CHECK(m.holonomy_step(0.0) == cplx(0.0));

    cplx w2 = m.holonomy_step(m.holonomy_step(w));
    CHECK(std::abs(std::abs(w2) - std::abs(w) * std::exp(-2 * kTwoPi)) <
          1e-12 * std::abs(w2));
}

TEST_CASE("holonomy iterates match the parametrization shifted by 2 pi n") {
    fol::Rng rng(99);
    for (cplx lambda : {I, cplx(-1.0, 1.0), cplx(0.3, 0.8)}) {
        LeafModel m(lambda);
        for (int t = 0; t < 50; ++t) {
            cplx alpha = std::exp(cplx(rng.uniform(-2.0, 0.0), rng.uniform(0.0, kTwoPi)));
            cplx zeta(rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0));
            int n = 1 + (t % 5);
            cplx w = m.at(alpha, zeta).w;
            for (int k = 0; k < n; ++k) w = m.holonomy_step(w);
            cplx want = m.at(alpha, zeta + kTwoPi * n).w;
            CHECK(std::abs(w - want) <= 1e-10 * std::abs(want));
        }
    }
}

TEST_CASE("bidisc window: examples and exhaustive agreement") {
    LeafModel mi(I);
    CHECK(mi.in_bidisc(cplx(1.0, 1.0)));
    CHECK_FALSE(mi.in_bidisc(cplx(1.0, -1.0)));
    LeafModel mh(cplx(-1.0, 1.0));
    CHECK_FALSE(mh.in_bidisc(cplx(-0.5, 1.0))); // u=-0.5 < v=1 fails bu+av >= 0

    // window predicate vs direct |z|<=1, |w|<=1 through the parametrization,
    // on a 200x200 grid, away from a thin boundary band
    for (cplx lambda : {I, cplx(-1.0, 1.0)}) {
        LeafModel m(lambda);
        cplx alpha = 0.5;
        int disagreements = 0;
        for (int iu = 0; iu < 200; ++iu)
            for (int iv = 0; iv < 200; ++iv) {
                double u = -8.0 + 16.0 * iu / 199.0;
                double v = -8.0 + 16.0 * iv / 199.0;
                auto p = m.at(alpha, {u, v});
                double band = std::max(std::abs(std::abs(p.z) - 1.0),
                                       std::abs(std::abs(p.w) - 1.0));
                bool direct = std::abs(p.z) <= 1.0 && std::abs(p.w) <= 1.0;
                bool window = m.in_bidisc({u, v});
                if (band < 1e-10) continue;
                if (direct != window) ++disagreements;
            }
        CHECK(disagreements == 0);
    }
}

TEST_CASE("plaque windows") {
    LeafModel m(I); // a = 0: plaques need n >= 0 inside the bidisc
    auto w0 = m.plaque_window(0, 0.0, 10.0);
    CHECK_FALSE(w0.empty);
    CHECK(w0.umin == 0.0);
    CHECK(w0.umax == doctest::Approx(kTwoPi));
    auto wneg = m.plaque_window(-1, 0.0, 10.0);
    CHECK(wneg.empty);

    LeafModel mp(cplx(0.5, 1.0)); // a > 0: negative plaques enter for large v
    auto wn = mp.plaque_window(-1, 0.0, 100.0);
    CHECK_FALSE(wn.empty);
    CHECK(wn.vmin >= -mp.b() * wn.umax / mp.a() - 1e-12);
}

TEST_CASE("plaque graph branches") {
    LeafModel m(I);
    CHECK(std::abs(m.plaque_graph(1.0, 0, 1.0) - 1.0) < 1e-13);
    CHECK(std::abs(m.plaque_graph(1.0, 0, std::exp(-1.0)) - std::exp(-I)) < 1e-13);
    CHECK(std::abs(m.plaque_graph(1.0, 1, 1.0) - std::exp(-kTwoPi)) < 1e-15);

    // off-plaque: |w| > 1 for n = -1 at z = 1
    CHECK_THROWS_WITH_AS(m.plaque_graph(1.0, -1, 1.0), doctest::Contains("off-plaque"),
                         fol::Error);

    // branch selection is consistent with the parametrization
    fol::Rng rng(13);
    for (int t = 0; t < 200; ++t) {
        cplx alpha = std::exp(cplx(rng.uniform(-kTwoPi, 0.0), rng.uniform(0.0, kTwoPi)));
        double u = rng.uniform(0.0, 6 * kTwoPi);
        double v = rng.uniform(0.05, 3.0);
        auto p = m.at(alpha, {u, v});
        long n = p.plaque_n;
        cplx w = m.plaque_graph(alpha, n, p.z, false);
        CHECK(std::abs(w - p.w) <= 1e-11 * std::abs(p.w));
    }
}

TEST_CASE("slope variation along plaques follows i(lambda-1)S") {
    // S(zeta) = lambda w/z satisfies dS/dzeta = i (lambda - 1) S
    for (cplx lambda : {I, cplx(-1.0, 1.0), cplx(0.3, 0.9)}) {
        LeafModel m(lambda);
        fol::Rng rng(21);
        for (int t = 0; t < 100; ++t) {
            cplx alpha = std::exp(cplx(rng.uniform(-2.0, 0.0), rng.uniform(0.0, kTwoPi)));
            cplx zeta(rng.uniform(0.0, 10.0), rng.uniform(0.1, 5.0));
            auto S = [&](cplx zt) {
                auto p = m.at(alpha, zt);
                return m.lambda() * p.w / p.z;
            };
            const double h = 1e-6;
            cplx dnum = (S(zeta + h) - S(zeta - h)) / (2.0 * h);
            cplx want = I * (lambda - 1.0) * S(zeta);
            CHECK(std::abs(dnum - want) <= 1e-6 * (1.0 + std::abs(want)));
        }
    }
}
