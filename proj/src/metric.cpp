#include "fol/metric.hpp"

#include <cmath>

#include "fol/error.hpp"

namespace fol {

HarmonicLeafFunction HarmonicLeafFunction::exact(
    std::function<double(double, double)> h,
    std::function<std::array<double, 2>(double, double)> grad, std::string tag) {
    HarmonicLeafFunction f;
    f.h_ = std::move(h);
    f.grad_ = std::move(grad);
    f.tag_ = std::move(tag);
    return f;
}

HarmonicLeafFunction HarmonicLeafFunction::numeric(std::function<double(double, double)> h,
                                                   double h_fd, std::string tag) {
    HarmonicLeafFunction f;
    f.h_ = std::move(h);
    f.h_fd_ = h_fd;
    f.tag_ = std::move(tag);
    return f;
}

HarmonicLeafFunction HarmonicLeafFunction::from_kernel_mix(const KernelMix& mix) {
    return exact([mix](double x, double y) { return mix.extend(x, y); },
                 [mix](double x, double y) { return mix.gradient(x, y); }, "kernel-mix");
}

HarmonicLeafFunction HarmonicLeafFunction::from_boundary(const BoundaryFunction& data,
                                                         double h_fd) {
    auto h = [data](double x, double y) { return poisson_extend(data, {x, y}, 1e-10); };
    return numeric(h, h_fd, "poisson:" + data.tag());
}

double HarmonicLeafFunction::value(double x, double y) const { return h_(x, y); }

std::array<double, 2> HarmonicLeafFunction::gradient(double x, double y) const {
    if (grad_) return grad_(x, y);
    // Richardson-extrapolated central differences
    auto central = [&](double step) -> std::array<double, 2> {
        return {(h_(x + step, y) - h_(x - step, y)) / (2 * step),
                (h_(x, y + step) - h_(x, y - step)) / (2 * step)};
    };
    auto d1 = central(h_fd_);
    auto d2 = central(0.5 * h_fd_);
    return {(4.0 * d2[0] - d1[0]) / 3.0, (4.0 * d2[1] - d1[1]) / 3.0};
}

cplx HarmonicLeafFunction::dz(double x, double y) const {
    auto g = gradient(x, y);
    return 0.5 * cplx(g[0], -g[1]);
}

cplx tau_at(const HarmonicLeafFunction& h, cplx p) {
    double v = h.value(p.real(), p.imag());
    if (!(v > 0.0)) throw Error("nonpositive", "tau needs h > 0");
    return h.dz(p.real(), p.imag()) / v;
}

double rho_T(const HarmonicLeafFunction& h, cplx p) {
    cplx t = tau_at(h, p);
    return 4.0 * std::norm(t);
}

CurvatureResult curvature_at(const HarmonicLeafFunction& h, cplx p, double h_fd) {
    double x = p.real(), y = p.imag();
    double hv = h.value(x, y);
    if (!(hv > 0.0)) throw Error("nonpositive", "curvature needs h > 0");
    cplx hz = h.dz(x, y);
    if (std::abs(hz) < kCriticalTol)
        throw Error("metric-degenerate", "curvature undefined on the critical set");

    auto g = [&](double gx, double gy) -> cplx {
        double val = h.value(gx, gy);
        if (!(val > 0.0)) throw Error("nonpositive", "h must stay positive on the stencil");
        return h.dz(gx, gy) / val;
    };
    // d/dzbar = (d/dx + i d/dy)/2 with Richardson extrapolation
    auto dzbar = [&](double step) {
        cplx dx = (g(x + step, y) - g(x - step, y)) / (2.0 * step);
        cplx dy = (g(x, y + step) - g(x, y - step)) / (2.0 * step);
        return 0.5 * (dx + cplx(0.0, 1.0) * dy);
    };
    cplx d1 = dzbar(h_fd);
    cplx d2 = dzbar(0.5 * h_fd);
    cplx der = (4.0 * d2 - d1) / 3.0;

    cplx kappa = (hv * hv) / std::norm(hz) * der;
    return {kappa.real(), kappa.imag()};
}

double mu_density(const HarmonicLeafFunction& h, cplx p) {
    double v = h.value(p.real(), p.imag());
    if (!(v > 0.0)) throw Error("nonpositive", "mu density needs h > 0");
    return std::norm(h.dz(p.real(), p.imag())) / v;
}

ChiVector chi_at(const HarmonicLeafFunction& h, cplx p) {
    double x = p.real(), y = p.imag();
    double hv = h.value(x, y);
    if (!(hv > 0.0)) throw Error("nonpositive", "chi needs h > 0");
    auto grad = h.gradient(x, y);
    double hz2 = 0.25 * (grad[0] * grad[0] + grad[1] * grad[1]); // |h_z|^2
    if (hz2 < kCriticalTol * kCriticalTol)
        throw Error("metric-degenerate", "chi blows up on the critical set");
    double ux = hv / hz2 * grad[0];
    double uy = hv / hz2 * grad[1];
    // g_T(chi, chi) = rho_T |chi|^2 = 1
    double rho = 4.0 * hz2 / (hv * hv);
    double c = 1.0 / std::sqrt(rho * (ux * ux + uy * uy));
    return {c * ux, c * uy, c};
}

FlowStepResult flow_step(const HarmonicLeafFunction& h, cplx p, double dt) {
    auto chi = [&](cplx q) {
        try {
            auto v = chi_at(h, q);
            return cplx(v.x, v.y);
        } catch (const Error& e) {
            if (e.code() == "metric-degenerate")
                throw Error("hit-critical-set", "flow reached the critical set");
            throw;
        }
    };
    cplx k1 = chi(p);
    cplx k2 = chi(p + 0.5 * dt * k1);
    cplx k3 = chi(p + 0.5 * dt * k2);
    cplx k4 = chi(p + dt * k3);
    cplx step = dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    cplx q = p + step;

    // harmonic conjugate increment along the chord: dv = -h_y dx + h_x dy,
    // Simpson on the path
    auto dv = [&](cplx at, cplx dir) {
        auto g = h.gradient(at.real(), at.imag());
        return -g[1] * dir.real() + g[0] * dir.imag();
    };
    double conj = (dv(p, step) + 4.0 * dv(p + 0.5 * step, step) + dv(q, step)) / 6.0;
    return {q, conj};
}

double halfplane_density(double V) {
    if (!(V > 0.0)) throw Error("arity", "half-plane density needs V > 0");
    return 1.0 / (V * V);
}

double sector_comparison_density(const SectorChart& chart, cplx zeta) {
    auto uv = chart.to_halfplane(zeta);
    if (!(uv[1] > 0.0)) throw Error("on-boundary", "comparison density needs interior zeta");
    double g = chart.gamma();
    double dphi = g * std::pow(std::abs(zeta), g - 1.0);
    return dphi * dphi / (uv[1] * uv[1]);
}

double ahlfors_schwarz_gap(const SectorChart& chart, const HarmonicLeafFunction& h,
                           cplx zeta) {
    return sector_comparison_density(chart, zeta) - rho_T(h, zeta);
}

namespace {

// mu density in sector coordinates for boundary data extended through
// zeta -> zeta^gamma; conformally invariant combination |H_zeta|^2 / H
double mu_density_sector(const SectorChart& chart, const KernelMix& mix, double u, double v) {
    cplx zeta(u, v);
    auto uv = chart.to_halfplane(zeta);
    double H = mix.extend(uv[0], uv[1]);
    if (!(H > 0.0)) return 0.0;
    auto g = mix.gradient(uv[0], uv[1]);
    double Hz2_half = 0.25 * (g[0] * g[0] + g[1] * g[1]);
    double dphi = chart.gamma() * std::pow(std::abs(zeta), chart.gamma() - 1.0);
    return Hz2_half * dphi * dphi / H;
}

double mass_quadrature(const SectorChart& chart, const KernelMix& mix, double L, int n) {
    // region { v >= L, b u + a v >= L }; substitute
    //   v = L + tan(s), u = (L - a v)/b + tan(t), s,t in [0, pi/2)
    const double half = 0.5 * kPi;
    double sum = 0.0;
    double hs = half / n;
    auto node_weight = [&](int i) {
        // composite Simpson weights
        if (i == 0 || i == n) return 1.0;
        return (i % 2 == 1) ? 4.0 : 2.0;
    };
    for (int i = 0; i < n; ++i) { // skip s = pi/2 (integrand decays, tan overflows)
        double s = i * hs;
        double cs = std::cos(s);
        double v = L + std::tan(s);
        double jac_s = 1.0 / (cs * cs);
        double inner = 0.0;
        double u0 = (L - chart.a() * v) / chart.b();
        for (int j = 0; j < n; ++j) {
            double t = j * hs;
            double ct = std::cos(t);
            double u = u0 + std::tan(t);
            double jac_t = 1.0 / (ct * ct);
            inner += node_weight(j) * mu_density_sector(chart, mix, u, v) * jac_t;
        }
        inner *= hs / 3.0;
        sum += node_weight(i) * inner * jac_s;
    }
    return sum * hs / 3.0;
}

} // namespace

MassResult mu_mass_model(const ModelMassSpec& spec, double r) {
    if (!(r > 0.0 && r < 1.0)) throw Error("arity", "mass region needs 0 < r < 1");
    if (!spec.family) throw Error("arity", "mass needs a boundary family");
    SectorChart chart(spec.lambda);
    const double L = std::log(1.0 / r);

    auto average = [&](int mesh) {
        double acc = 0.0;
        for (int k = 0; k < spec.alpha_samples; ++k) {
            // uniform on the annulus: log|alpha| in [-2 pi b, 0), arg in [0, 2 pi)
            double frac = (k + 0.5) / spec.alpha_samples;
            cplx alpha = std::exp(cplx(-kTwoPi * chart.b() * frac, kTwoPi * frac));
            acc += mass_quadrature(chart, spec.family(alpha), L, mesh);
        }
        return acc / spec.alpha_samples * (kTwoPi * chart.b());
    };

    MassResult out;
    double full = average(spec.mesh);
    double halfm = average(spec.mesh / 2);
    out.value = full;
    out.error = std::abs(full - halfm);
    return out;
}

} // namespace fol
