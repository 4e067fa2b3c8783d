#pragma once

#include <functional>
#include <string>

#include "fol/harmonic.hpp"
#include "fol/leafgeom.hpp"

namespace fol {

// Positive harmonic function on a planar (plaque/sector) domain together
// with a gradient: exact when a closed form is known, central differences
// with Richardson extrapolation otherwise.
class HarmonicLeafFunction {
public:
    static HarmonicLeafFunction exact(std::function<double(double, double)> h,
                                      std::function<std::array<double, 2>(double, double)> grad,
                                      std::string tag = "exact");
    static HarmonicLeafFunction numeric(std::function<double(double, double)> h, double h_fd,
                                        std::string tag = "numeric");
    static HarmonicLeafFunction from_kernel_mix(const KernelMix& mix);
    // extension of boundary data evaluated in upper-half-plane coordinates
    static HarmonicLeafFunction from_boundary(const BoundaryFunction& data, double h_fd = 1e-3);

    double value(double x, double y) const;
    std::array<double, 2> gradient(double x, double y) const; // (h_x, h_y)
    cplx dz(double x, double y) const;                        // (h_x - i h_y)/2
    double fd_step() const { return h_fd_; }
    const std::string& tag() const { return tag_; }

private:
    std::function<double(double, double)> h_;
    std::function<std::array<double, 2>(double, double)> grad_; // empty: use differences
    double h_fd_ = 1e-3;
    std::string tag_;
};

inline constexpr double kCriticalTol = 1e-8;

// tau = h_z / h; errors "nonpositive" when h(p) <= 0.
cplx tau_at(const HarmonicLeafFunction& h, cplx p);

// metric density rho_T = 4 |h_z|^2 / h^2 (curvature -1 normalization)
double rho_T(const HarmonicLeafFunction& h, cplx p);

// Gaussian curvature (h^2/|h_z|^2) d/dzbar (h_z/h); the imaginary part of the
// inner derivative must vanish for harmonic h and is reported for checking.
struct CurvatureResult {
    double kappa = 0.0;
    double imag_part = 0.0;
};
CurvatureResult curvature_at(const HarmonicLeafFunction& h, cplx p, double h_fd = 1e-3);

// mu_T leafwise density |h_z|^2 / h (0 at critical points)
double mu_density(const HarmonicLeafFunction& h, cplx p);

struct ChiVector {
    double x = 0.0, y = 0.0;
    double c = 0.0; // normalization constant solved from g_T(chi, chi) = 1
};
// chi = c (h/|h_z|^2) (h_x, h_y); errors "metric-degenerate" at critical points.
ChiVector chi_at(const HarmonicLeafFunction& h, cplx p);

struct FlowStepResult {
    cplx p;
    double conj_delta = 0.0; // increment of the harmonic conjugate along the step
};
// One RK4 step of chi; errors "hit-critical-set" when the step approaches C_T.
FlowStepResult flow_step(const HarmonicLeafFunction& h, cplx p, double dt);

// curvature -1 density of the upper half plane, 1/V^2
double halfplane_density(double V);

// its pullback to the sector under zeta -> zeta^gamma
double sector_comparison_density(const SectorChart& chart, cplx zeta);

// rho_P(zeta) - rho_T(zeta) for h given in sector coordinates; >= 0 up to
// numerical slack by the Ahlfors-Schwarz comparison.
double ahlfors_schwarz_gap(const SectorChart& chart, const HarmonicLeafFunction& h, cplx zeta);

struct MassResult {
    double value = 0.0;
    double error = 0.0; // |value - value at half mesh|
};

struct ModelMassSpec {
    cplx lambda{0.0, 1.0};
    std::function<KernelMix(cplx)> family; // boundary data per transversal alpha
    int alpha_samples = 6;
    int mesh = 96; // nodes per axis before halving check
};

// mu_T mass of the model current on the bidisc of radius r (0 < r < 1):
// quadrature of |H_zeta|^2 / H over {v >= log(1/r), b u + a v >= log(1/r)},
// averaged over the transversal annulus.
MassResult mu_mass_model(const ModelMassSpec& spec, double r);

} // namespace fol
