#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "fol/metric.hpp"
#include "fol/rng.hpp"

using fol::cplx;
using fol::HarmonicLeafFunction;
using fol::KernelMix;

namespace {
const cplx I(0.0, 1.0);

HarmonicLeafFunction coordinate_x() {
    return HarmonicLeafFunction::exact([](double x, double) { return x; },
                                       [](double, double) -> std::array<double, 2> {
                                           return {1.0, 0.0};
                                       },
                                       "h=x");
}

KernelMix random_mix(fol::Rng& rng, int max_bumps = 4, double offset = 0.0) {
    KernelMix mix;
    int nb = 1 + static_cast<int>(rng.uniform() * max_bumps);
    for (int i = 0; i < nb; ++i)
        mix.bumps.push_back({rng.uniform(0.1, 2.0), rng.uniform(-3.0, 3.0),
                             rng.uniform(0.3, 2.0)});
    mix.offset = offset;
    return mix;
}

// harmonic function on the sector: boundary data extended through zeta^gamma,
// with the exact chain-rule gradient
HarmonicLeafFunction sector_function(const fol::SectorChart& chart, const KernelMix& mix) {
    auto val = [chart, mix](double u, double v) {
        auto UV = chart.to_halfplane({u, v});
        return mix.extend(UV[0], UV[1]);
    };
    auto grad = [chart, mix](double u, double v) -> std::array<double, 2> {
        cplx zeta(u, v);
        auto UV = chart.to_halfplane(zeta);
        auto g = mix.gradient(UV[0], UV[1]);
        cplx hz_up = 0.5 * cplx(g[0], -g[1]);
        cplx dphi = chart.gamma() * std::pow(zeta, chart.gamma() - 1.0);
        cplx hz = hz_up * dphi;
        return {2.0 * hz.real(), -2.0 * hz.imag()};
    };
    return HarmonicLeafFunction::exact(val, grad, "sector");
}

} // namespace

TEST_CASE("tau at simple functions") {
    auto hx = coordinate_x();
    cplx t = fol::tau_at(hx, {2.0, 0.7});
    CHECK(std::abs(t - cplx(0.25)) < 1e-14); // (1/2)/x0

    auto one = HarmonicLeafFunction::exact([](double, double) { return 1.0; },
                                           [](double, double) -> std::array<double, 2> {
                                               return {0.0, 0.0};
                                           });
    CHECK(std::abs(fol::tau_at(one, {0.3, 0.3})) == 0.0);

    CHECK_THROWS_WITH_AS(fol::tau_at(hx, {-1.0, 0.0}), doctest::Contains("nonpositive"),
                         fol::Error);
}

TEST_CASE("numeric gradient matches the exact one through quadrature") {
    KernelMix mix;
    mix.bumps = {{1.0, 0.0, 1.0}};
    auto numeric = HarmonicLeafFunction::from_boundary(mix.as_boundary(), 1e-3);
    auto exact = HarmonicLeafFunction::from_kernel_mix(mix);
    cplx p(0.0, 1.0);
    cplx tn = fol::tau_at(numeric, p);
    cplx te = fol::tau_at(exact, p);
    CHECK(std::abs(tn - te) < 1e-7);
}

TEST_CASE("curvature is exactly -1 for h = x") {
    auto hx = coordinate_x();
    for (double x : {0.5, 1.0, 3.0}) {
        auto k = fol::curvature_at(hx, {x, 0.2});
        CHECK(std::abs(k.kappa + 1.0) < 1e-9);
        CHECK(std::abs(k.imag_part) < 1e-9);
    }
}

TEST_CASE("curvature identity across random positive harmonic functions") {
    fol::Rng rng(1234);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        KernelMix mix = random_mix(rng, 4, rng.uniform() < 0.3 ? rng.uniform(0.0, 0.5) : 0.0);
        auto h = HarmonicLeafFunction::from_kernel_mix(mix);
        for (int k = 0; k < 10; ++k) {
            cplx p(rng.uniform(-3.0, 3.0), rng.uniform(0.2, 3.0));
            fol::CurvatureResult c;
            try {
                c = fol::curvature_at(h, p, 1e-3);
            } catch (const fol::Error&) {
                continue; // near-critical sample
            }
            CHECK(std::abs(c.kappa + 1.0) < 1e-4);
            CHECK(std::abs(c.imag_part) < 1e-6);
            ++checked;
        }
    }
    CHECK(checked > 900);
}

TEST_CASE("non-harmonic control is rejected by the identity") {
    auto sq = HarmonicLeafFunction::exact([](double x, double) { return x * x; },
                                          [](double x, double) -> std::array<double, 2> {
                                              return {2.0 * x, 0.0};
                                          },
                                          "x^2");
    auto k = fol::curvature_at(sq, {1.0, 0.0});
    CHECK(std::abs(k.kappa + 1.0) > 0.4); // analytic value -1/2
}

TEST_CASE("mu density") {
    auto hx = coordinate_x();
    CHECK(std::abs(fol::mu_density(hx, {2.0, 0.0}) - 0.125) < 1e-14); // (1/4)/x
    auto c5 = HarmonicLeafFunction::exact([](double, double) { return 5.0; },
                                          [](double, double) -> std::array<double, 2> {
                                              return {0.0, 0.0};
                                          });
    CHECK(fol::mu_density(c5, {0.0, 0.0}) == 0.0);

    // homogeneity: density(c h) = c density(h)
    fol::Rng rng(5);
    KernelMix mix = random_mix(rng);
    auto h1 = HarmonicLeafFunction::from_kernel_mix(mix);
    KernelMix doubled = mix;
    for (auto& b : doubled.bumps) b.c *= 2.0;
    doubled.offset *= 2.0;
    auto h2 = HarmonicLeafFunction::from_kernel_mix(doubled);
    for (int t = 0; t < 20; ++t) {
        cplx p(rng.uniform(-2, 2), rng.uniform(0.3, 2.0));
        double d1 = fol::mu_density(h1, p);
        double d2 = fol::mu_density(h2, p);
        CHECK(std::abs(d2 - 2.0 * d1) < 1e-12 * (1.0 + d1));
    }
}

TEST_CASE("chi normalization and direction") {
    auto hx = coordinate_x();
    auto chi = fol::chi_at(hx, {1.0, 0.5});
    CHECK(std::abs(chi.y) < 1e-14);
    CHECK(chi.x > 0.0);
    CHECK(std::abs(chi.c - 0.25) < 1e-12);
    double rho = fol::rho_T(hx, {1.0, 0.5});
    CHECK(std::abs(rho * (chi.x * chi.x + chi.y * chi.y) - 1.0) < 1e-12);

    auto one = HarmonicLeafFunction::exact([](double, double) { return 1.0; },
                                           [](double, double) -> std::array<double, 2> {
                                               return {0.0, 0.0};
                                           });
    CHECK_THROWS_WITH_AS(fol::chi_at(one, {0.0, 0.0}), doctest::Contains("metric-degenerate"),
                         fol::Error);

    fol::Rng rng(9);
    for (int t = 0; t < 50; ++t) {
        KernelMix mix = random_mix(rng);
        auto h = HarmonicLeafFunction::from_kernel_mix(mix);
        cplx p(rng.uniform(-2, 2), rng.uniform(0.3, 2.0));
        fol::ChiVector v;
        try {
            v = fol::chi_at(h, p);
        } catch (const fol::Error&) {
            continue;
        }
        double r = fol::rho_T(h, p);
        CHECK(std::abs(r * (v.x * v.x + v.y * v.y) - 1.0) < 1e-8);
    }
}

TEST_CASE("flow follows level sets of the conjugate") {
    auto hx = coordinate_x();
    cplx p(1.0, 0.5);
    auto st = fol::flow_step(hx, p, 0.1);
    CHECK(st.p.real() > 1.0);
    CHECK(std::abs(st.p.imag() - 0.5) < 1e-12);
    CHECK(std::abs(st.conj_delta) < 1e-12);

    auto hshift = HarmonicLeafFunction::exact([](double x, double) { return x + 2.0; },
                                              [](double, double) -> std::array<double, 2> {
                                                  return {1.0, 0.0};
                                              });
    auto st2 = fol::flow_step(hshift, {0.0, -1.0}, 0.2);
    CHECK(std::abs(st2.p.imag() + 1.0) < 1e-12);

    // monotone h and small conjugate drift along a kernel-mix flow
    fol::Rng rng(31);
    KernelMix mix = random_mix(rng, 3);
    auto h = HarmonicLeafFunction::from_kernel_mix(mix);
    cplx q(0.5, 1.5);
    double total_conj = 0.0;
    double hprev = h.value(q.real(), q.imag());
    const double dt = 5e-3;
    for (int s = 0; s < 200; ++s) {
        auto r = fol::flow_step(h, q, dt);
        total_conj += r.conj_delta;
        q = r.p;
        double hv = h.value(q.real(), q.imag());
        CHECK(hv > hprev);
        hprev = hv;
    }
    CHECK(std::abs(total_conj) < 1e-6);
}

TEST_CASE("flow stops on the critical set") {
    KernelMix mix;
    mix.bumps = {{1.0, -2.0, 0.5}, {1.0, 2.0, 0.5}};
    auto h = HarmonicLeafFunction::from_kernel_mix(mix);
    // symmetric saddle on the V axis: H_U = 0, H_V = 0 at V = 2 - t
    cplx crit(0.0, 1.5);
    auto g = h.gradient(crit.real(), crit.imag());
    REQUIRE(std::abs(g[0]) < 1e-12);
    REQUIRE(std::abs(g[1]) < 1e-12);
    CHECK_THROWS_WITH_AS(fol::flow_step(h, crit, 0.05), doctest::Contains("hit-critical-set"),
                         fol::Error);
}

TEST_CASE("Ahlfors-Schwarz equality case on the right half plane") {
    auto hx = coordinate_x();
    fol::Rng rng(77);
    for (int t = 0; t < 100; ++t) {
        double x = rng.uniform(0.05, 5.0);
        double y = rng.uniform(-5.0, 5.0);
        double rho_t = fol::rho_T(hx, {x, y});
        double rho_p = 1.0 / (x * x);
        CHECK(std::abs(rho_t - rho_p) < 1e-10 * rho_p);
    }
}

TEST_CASE("Ahlfors-Schwarz gap is nonnegative on the sector") {
    auto chart = fol::sector_of(I);
    fol::Rng rng(42);
    KernelMix mix = random_mix(rng, 3);
    auto h = sector_function(chart, mix);
    int samples = 0;
    while (samples < 1000) {
        double rho = rng.uniform(0.05, 2.5);
        double th = rng.uniform(0.02, chart.theta_max() - 0.02);
        cplx zeta = rho * std::exp(I * th);
        double gap;
        try {
            gap = fol::ahlfors_schwarz_gap(chart, h, zeta);
        } catch (const fol::Error&) {
            continue;
        }
        CHECK(gap >= -1e-8);
        ++samples;
    }

    // h == 1: the gap is the full comparison density
    auto one = HarmonicLeafFunction::exact([](double, double) { return 1.0; },
                                           [](double, double) -> std::array<double, 2> {
                                               return {0.0, 0.0};
                                           });
    cplx zeta = 0.8 * std::exp(I * 0.7);
    CHECK(fol::ahlfors_schwarz_gap(chart, one, zeta) ==
          doctest::Approx(fol::sector_comparison_density(chart, zeta)));
}

TEST_CASE("sector harmonic functions also satisfy the curvature identity") {
    auto chart = fol::sector_of(cplx(-1.0, 1.0));
    fol::Rng rng(55);
    KernelMix mix = random_mix(rng, 2);
    auto h = sector_function(chart, mix);
    int good = 0;
    for (int t = 0; t < 30; ++t) {
        double rho = rng.uniform(0.3, 1.5);
        double th = rng.uniform(0.1, chart.theta_max() - 0.1);
        cplx zeta = rho * std::exp(I * th);
        try {
            auto k = fol::curvature_at(h, zeta, 1e-4);
            CHECK(std::abs(k.kappa + 1.0) < 1e-4);
            ++good;
        } catch (const fol::Error&) {
        }
    }
    CHECK(good > 20);
}

TEST_CASE("model mass: finite, mesh stable, decreasing in r") {
    fol::ModelMassSpec spec;
    spec.lambda = I;
    spec.family = [](cplx alpha) {
        KernelMix mix;
        double phase = std::arg(alpha);
        mix.bumps = {{1.0, 0.6 * phase, 1.0}, {0.4, -1.0, 0.8}};
        return mix;
    };
    spec.alpha_samples = 4;
    spec.mesh = 64;

    double prev = 1e300;
    for (double r : {0.2, 0.1, 0.05}) {
        auto m = fol::mu_mass_model(spec, r);
        CHECK(std::isfinite(m.value));
        CHECK(m.value > 0.0);
        CHECK(m.error <= 0.01 * m.value);
        CHECK(m.value < prev);
        prev = m.value;
    }
}
