#include "fol/leafgeom.hpp"

#include <cmath>

#include "fol/error.hpp"

namespace fol {

LeafModel::LeafModel(cplx lambda) : lambda_(lambda) {
    if (lambda.imag() == 0.0)
        throw Error("degenerate-singularity", "leaf model needs Im(lambda) != 0");
    holonomy_factor_ = std::exp(cplx(0.0, kTwoPi) * lambda_);
}

LeafPoint LeafModel::at(cplx alpha, cplx zeta) const {
    if (std::abs(alpha) == 0.0) throw Error("arity", "alpha must be nonzero");
    const cplx i(0.0, 1.0);
    cplx tau = zeta + std::log(std::abs(alpha)) / b();
    LeafPoint p;
    p.alpha = alpha;
    p.zeta = zeta;
    p.z = std::exp(i * tau);
    p.w = alpha * std::exp(i * lambda_ * tau);
    p.plaque_n = plaque_index(p.u());
    return p;
}

double LeafModel::tangency_residual(cplx alpha, cplx zeta) const {
    const cplx i(0.0, 1.0);
    cplx tau = zeta + std::log(std::abs(alpha)) / b();
    cplx z = std::exp(i * tau);
    cplx w = alpha * std::exp(i * lambda_ * tau);
    cplx dz = i * z;
    cplx dw = i * lambda_ * w;
    double denom = std::abs(z) * std::abs(w) * (1.0 + std::abs(lambda_));
    if (denom == 0.0) return 0.0;
    return std::abs(z * dw - lambda_ * w * dz) / denom;
}

bool LeafModel::in_bidisc(cplx zeta, double slack) const {
    double u = zeta.real(), v = zeta.imag();
    return v >= -slack && b() * u + a() * v >= -slack;
}

LeafModel::UVWindow LeafModel::plaque_window(long n, double vmin_clip, double vmax_clip) const {
    UVWindow win;
    win.umin = kTwoPi * static_cast<double>(n);
    win.umax = win.umin + kTwoPi;
    win.vmin = std::max(0.0, vmin_clip);
    win.vmax = vmax_clip;
    if (a() > 0.0) {
        // b u + a v >= 0 is weakest at u = umax
        win.vmin = std::max(win.vmin, -b() * win.umax / a());
    } else if (a() < 0.0) {
        win.vmax = std::min(win.vmax, b() * win.umax / (-a()));
    } else if (win.umax <= 0.0) {
        win.vmax = win.vmin - 1.0;
    }
    win.empty = !(win.vmin < win.vmax);
    return win;
}

cplx LeafModel::zeta_on_plaque(cplx alpha, long n, cplx z) const {
    if (std::abs(z) == 0.0) throw Error("off-plaque", "z must be nonzero");
    const cplx i(0.0, 1.0);
    cplx zeta0 = -i * std::log(z) - std::log(std::abs(alpha)) / b();
    double u0 = zeta0.real();
    long k = n - static_cast<long>(std::floor(u0 / kTwoPi));
    return zeta0 + kTwoPi * static_cast<double>(k);
}

cplx LeafModel::plaque_graph(cplx alpha, long n, cplx z, bool enforce_window) const {
    cplx zeta = zeta_on_plaque(alpha, n, z);
    if (enforce_window && !in_bidisc(zeta))
        throw Error("off-plaque", "plaque branch leaves the unit bidisc");
    return at(alpha, zeta).w;
}

SectorChart::SectorChart(cplx lambda) : model_((lambda.imag() > 0.0) ? lambda : cplx(0, 1)) {
    if (lambda.imag() <= 0.0)
        throw Error("not-normalized", "sector chart needs Im(lambda) > 0");
    // arctan(-b/a) with the branch in (0, pi); a = 0 gives pi/2
    theta_max_ = std::atan2(lambda.imag(), -lambda.real());
    gamma_ = kPi / theta_max_;
    alpha_mod_min_ = std::exp(-kTwoPi * lambda.imag());
}

bool SectorChart::in_sector(cplx zeta, double slack) const {
    if (std::abs(zeta) == 0.0) return false;
    double th = std::atan2(zeta.imag(), zeta.real());
    return th >= -slack && th <= theta_max_ + slack;
}

std::array<double, 2> SectorChart::to_halfplane(cplx zeta) const {
    double rho = std::abs(zeta);
    if (rho == 0.0) throw Error("outside-sector", "zeta must be nonzero");
    double th = std::atan2(zeta.imag(), zeta.real());
    if (th < -1e-12 || th > theta_max_ + 1e-12)
        throw Error("outside-sector", "zeta outside the closed sector");
    double r = std::pow(rho, gamma_);
    return {r * std::cos(gamma_ * th), r * std::sin(gamma_ * th)};
}

} // namespace fol
