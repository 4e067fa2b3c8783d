#pragma once

#include <array>
#include <optional>

#include "fol/poly.hpp"

namespace fol {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

struct LeafPoint {
    cplx alpha;   // transversal parameter (authoritative, with zeta)
    cplx zeta;    // u + iv sector coordinate
    cplx z, w;    // derived chart coordinates
    long plaque_n = 0;

    double u() const { return zeta.real(); }
    double v() const { return zeta.imag(); }
};

// Leaf parametrization of the linear model z dw - lambda w dz near a
// hyperbolic point:
//   z = e^{i(zeta + log|alpha|/b)},  w = alpha e^{i lambda (zeta + log|alpha|/b)}
// so |z| = e^{-v} and |w| = e^{-bu-av}. Valid for any b != 0.
class LeafModel {
public:
    explicit LeafModel(cplx lambda);

    cplx lambda() const { return lambda_; }
    double a() const { return lambda_.real(); }
    double b() const { return lambda_.imag(); }

    LeafPoint at(cplx alpha, cplx zeta) const;

    // |z dw/dzeta - lambda w dz/dzeta| / (|z||w|(1+|lambda|)), evaluated from
    // the exact derivatives of the parametrization.
    double tangency_residual(cplx alpha, cplx zeta) const;

    // Holonomy of one positive turn around z = 0 on a transversal z = z0:
    // w -> e^{2 pi i lambda} w, contracting |w| by e^{-2 pi b}.
    cplx holonomy_step(cplx w) const { return w * holonomy_factor_; }
    cplx holonomy_factor() const { return holonomy_factor_; }

    static long plaque_index(double u) { return static_cast<long>(std::floor(u / kTwoPi)); }

    // closed unit bidisc: v >= 0 and b u + a v >= 0 (small slack)
    bool in_bidisc(cplx zeta, double slack = 1e-12) const;

    struct UVWindow {
        double umin = 0, umax = 0, vmin = 0, vmax = 0;
        bool empty = true;
    };
    // bounding rectangle of plaque n inside the bidisc, v clipped to
    // [vmin_clip, vmax_clip]
    UVWindow plaque_window(long n, double vmin_clip, double vmax_clip) const;

    // zeta of the plaque-n branch over z (u in [2n pi, 2(n+1) pi))
    cplx zeta_on_plaque(cplx alpha, long n, cplx z) const;

    // w over z on plaque n; errors "off-plaque" when the point leaves the
    // closed bidisc (disabled by enforce_window = false).
    cplx plaque_graph(cplx alpha, long n, cplx z, bool enforce_window = true) const;

    // slope dw/dz = lambda w / z along the leaf
    cplx slope(cplx z, cplx w) const { return lambda_ * w / z; }

private:
    cplx lambda_;
    cplx holonomy_factor_;
};

// Sector package for a normalized hyperbolic ratio (b > 0): the part of the
// (u,v) plane parametrizing the leaf inside the unit bidisc is the sector
// 0 < theta < theta_max with theta_max = arctan(-b/a) taken in (0, pi), and
// zeta -> zeta^gamma (gamma = pi / theta_max > 1) maps it to the upper half
// plane.
class SectorChart {
public:
    explicit SectorChart(cplx lambda); // errors "not-normalized" if Im <= 0

    const LeafModel& model() const { return model_; }
    cplx lambda() const { return model_.lambda(); }
    double a() const { return model_.a(); }
    double b() const { return model_.b(); }
    double theta_max() const { return theta_max_; }
    double gamma() const { return gamma_; }
    double alpha_mod_min() const { return alpha_mod_min_; } // e^{-2 pi b}

    // zeta^gamma in polar form; zeta must lie in the closed sector, zeta != 0.
    std::array<double, 2> to_halfplane(cplx zeta) const; // (U, V)

    bool in_sector(cplx zeta, double slack = 1e-12) const;

private:
    LeafModel model_;
    double theta_max_;
    double gamma_;
    double alpha_mod_min_;
};

inline SectorChart sector_of(cplx lambda) { return SectorChart(lambda); }

} // namespace fol
