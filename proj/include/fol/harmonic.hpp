#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fol/leafgeom.hpp"
#include "fol/poly.hpp"

namespace fol {

enum class TailModel { zero_beyond, power_decay };

struct HalfPlanePoint {
    double U = 0.0;
    double V = 1.0; // must stay positive
};

// Positive boundary data on the real line. Either sampled (sorted abscissae,
// linear interpolation, tail model beyond the range) or backed by a closed
// form with a stated decay exponent: H(x) ~ C (1+|x|)^{-q}.
class BoundaryFunction {
public:
    static BoundaryFunction from_samples(std::vector<std::pair<double, double>> samples,
                                         TailModel tail, double decay_exponent = 0.0,
                                         std::string tag = "sampled");
    static BoundaryFunction from_function(std::function<double(double)> f,
                                          double decay_exponent, std::string tag = "closed-form");
    static BoundaryFunction constant(double value);
    static BoundaryFunction indicator(double lo, double hi);

    double operator()(double x) const;

    TailModel tail() const { return tail_; }
    double decay_exponent() const { return decay_q_; }
    bool compact_support() const { return tail_ == TailModel::zero_beyond; }
    bool sampled() const { return !samples_.empty(); }
    const std::vector<std::pair<double, double>>& samples() const { return samples_; }
    double range_lo() const { return lo_; }
    double range_hi() const { return hi_; }
    const std::string& tag() const { return tag_; }

private:
    std::function<double(double)> fn_; // set for function-backed data
    std::vector<std::pair<double, double>> samples_;
    TailModel tail_ = TailModel::zero_beyond;
    double decay_q_ = 0.0;
    double lo_ = 0.0, hi_ = 0.0;
    std::string tag_;
};

// (1/pi) Integral of H(x) V / (V^2 + (x-U)^2); the kernel is flattened by the
// substitution x = U + V tan(s), which keeps accuracy uniform in V. Errors:
// "divergent-boundary-data" when the tail is not integrable.
double poisson_extend(const BoundaryFunction& h, HalfPlanePoint p, double tol = 1e-9);

// Integral of H(x) (|x|+1)^{1/gamma - 1} dx; gamma > 1. Errors "divergent-
// boundary-data" when the tail decays too slowly (q <= 1/gamma).
double weighted_norm(const BoundaryFunction& h, double gamma, double tol = 1e-9);

// Harmonic value in sector coordinates: poisson_extend at zeta^gamma.
// Errors "on-boundary" for edge points, "outside-sector" beyond them.
double sector_harmonic_value(const BoundaryFunction& h, const SectorChart& chart, cplx zeta,
                             double tol = 1e-9);

// |F(p) - mean of the 4 axis neighbors| / h^2. Errors "stencil" when a
// stencil point leaves the domain.
double harmonic_residual(const std::function<double(double, double)>& F,
                         const std::function<bool(double, double)>& domain, double x, double y,
                         double h);

// Sum of Poisson kernels: boundary data with an exact harmonic extension
// (kernel semigroup: extending t/(x^2+t^2) to height V gives (t+V)/(x^2+(t+V)^2)).
// Used as the positive kernel family of the experiments and as the analytic
// oracle for the metric checks.
struct KernelMix {
    struct Bump {
        double c = 1.0;  // mass, > 0
        double x0 = 0.0; // center
        double t = 1.0;  // height parameter, > 0
    };
    std::vector<Bump> bumps;
    double offset = 0.0; // nonnegative constant part

    double boundary(double x) const;
    double extend(double U, double V) const;
    // exact gradient of the extension, (d/dU, d/dV)
    std::array<double, 2> gradient(double U, double V) const;
    BoundaryFunction as_boundary() const; // decay exponent 2 (or 0 with offset)
};

} // namespace fol
