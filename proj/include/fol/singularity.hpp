#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fol/foliation.hpp"
#include "fol/poly.hpp"

namespace fol {

// Row-major 2x2 complex matrix [[a, b], [c, d]].
struct Mat2 {
    cplx a, b, c, d;

    cplx det() const { return a * d - b * c; }
    cplx tr() const { return a + d; }
    std::array<cplx, 2> apply(cplx x, cplx y) const { return {a * x + b * y, c * x + d * y}; }
    Mat2 inverse() const;
};

struct LambdaResult {
    cplx lambda; // mu2 / mu1, ordered so Im >= 0 (|.| >= 1 when real)
    cplx mu1, mu2;
};

// Eigenvalue ratio of the linear part. Errors: "degenerate-singularity" on a
// zero eigenvalue, "non-semisimple" when the matrix is defective.
LambdaResult lambda_of(const Mat2& m);

enum class SingClass { hyperbolic, resonant_real, degenerate };

std::string to_string(SingClass c);

// hyperbolic iff |Im lambda| > tol_im
SingClass classify_hyperbolic(cplx lambda, double tol_im = 1e-9);

struct NormalizedLambda {
    cplx lambda;
    std::vector<std::string> moves; // "swap-axes" entries
    std::string note;               // set when Im <= 0 had to be kept
};

// Keep Re(lambda) away from 1 (guard band 0.05, swapping lambda -> 1/lambda),
// then prefer Im > 0 when a swap does not reintroduce Re = 1. The a != 1 rule
// wins over b > 0.
NormalizedLambda normalize_lambda(cplx lambda, double guard = 0.05);

// Jacobian of the directing field X = (beta, -alpha) at a singular point.
// Errors when the point is not singular (residual >= 1e-6).
Mat2 linear_part(const FoliationForm& f, int chart, const ComplexPoint& p);

// Truncated coordinate changes to/from linearizing coordinates at a
// hyperbolic point. forward maps local displacement (z,w) to coordinates in
// which the field is diag(mu1, mu2); inverse is its series inverse.
struct LinearizingJet {
    int order = 1;
    std::pair<Poly, Poly> forward;
    std::pair<Poly, Poly> inverse;
    cplx mu1, mu2;
    double conj_residual = 0.0; // max coefficient of (conjugated field - linear), deg <= order

    std::array<cplx, 2> apply_forward(cplx z, cplx w) const;
    std::array<cplx, 2> apply_inverse(cplx z, cplx w) const;
};

// Degree-by-degree solution of the homological equations (Poincare domain,
// no small divisors). Errors: "resonance" if a divisor falls below 1e-9.
LinearizingJet linearize_jet(const FoliationForm& f, int chart, const ComplexPoint& p,
                             int order = 6);

struct HyperbolicSingularity {
    ComplexPoint location;
    Mat2 linear;
    cplx lambda_raw;  // before normalization
    cplx lambda;      // after normalization
    std::vector<std::string> moves;
    SingClass cls = SingClass::degenerate;
};

// Locate, classify and normalize every singular point of a chart.
std::vector<HyperbolicSingularity> classify_singularities(const FoliationForm& f, int chart);

} // namespace fol
