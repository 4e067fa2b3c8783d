#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fol/poly.hpp"

namespace fol {

// Dense bivariate evaluator for chart forms; double Horner, no allocation.
struct FastPoly2 {
    int dz = 0, dw = 0;
    std::vector<cplx> c; // c[i*(dw+1)+j] multiplies z^i w^j

    FastPoly2() = default;
    explicit FastPoly2(const Poly& p);
    cplx eval(cplx z, cplx w) const;
};

// Affine restriction omega_1 = alpha dz + beta dw of the homogeneous form.
struct ChartForm {
    Poly alpha, beta;        // in variables (z, w)
    FastPoly2 alpha_f, beta_f;

    // Directing vector field X = (beta, -alpha); omega_1(X) = 0 identically.
    // Every module reads the line field through this one accessor.
    std::array<cplx, 2> direction_at(cplx z, cplx w) const {
        return {beta_f.eval(z, w), -alpha_f.eval(z, w)};
    }
};

// Degree-d holomorphic foliation of the projective plane, stored as the
// homogeneous 1-form a1 dx1 + a2 dx2 + a3 dx3 with sum x_i a_i = 0, plus its
// restrictions to the three standard affine charts.
class FoliationForm {
public:
    const Poly& a(int i) const { return a_[static_cast<size_t>(i)]; }
    int degree() const { return degree_d_; }     // = delta - 1
    int coeff_degree() const { return degree_d_ + 1; }
    const ChartForm& chart(int k) const;

    static constexpr int kNumCharts = 3;

private:
    friend FoliationForm make_foliation(const Poly&, const Poly&, const Poly&);
    std::array<Poly, 3> a_;
    std::array<ChartForm, 3> charts_;
    int degree_d_ = 0;
};

// Validates degrees, rejects common factors ("non-reduced") and Euler
// violations ("not-projective-form"), and precomputes the chart forms.
FoliationForm make_foliation(const Poly& a1, const Poly& a2, const Poly& a3);

// Homogenize a chart-0 affine form; any common x3 factor is divided out.
std::array<Poly, 3> homogenize_chart0(const Poly& alpha, const Poly& beta);

FoliationForm preset_linear(cplx lambda);
FoliationForm preset_jouanolou(int d);
FoliationForm preset_random(int d, std::uint64_t seed);

// Parse "linear:RE,IM" / "jouanolou:D" / "random:D,SEED".
FoliationForm preset_by_name(const std::string& spec);

// |sum x_i a_i(x)| scaled by ||x||^(delta+1); 0 at the origin.
double euler_residual(const FoliationForm& f, const ComplexPoint& x);

enum class PointFlag { simple, degenerate };

struct SingularPoint {
    ComplexPoint location; // (z, w) chart coordinates
    double residual = 0.0;
    PointFlag flag = PointFlag::simple;
};

struct SingularPointSet {
    int chart = 0;
    std::vector<SingularPoint> points;
};

// Isolated common zeros of (alpha, beta) with max-norm <= box_radius:
// resultant elimination, companion-matrix roots, back-substitution, Newton.
// Errors with "positive-dimensional-singularity" when the zero locus is a curve.
std::vector<SingularPoint> find_common_zeros(const Poly& alpha, const Poly& beta,
                                             double box_radius = 10.0);

SingularPointSet singular_points(const FoliationForm& f, int chart, double box_radius = 10.0);

// Projective chart transitions for points: chart k coordinates of the point
// whose chart `from` coordinates are (z, w). Errors if the target chart is
// at infinity for this point.
ComplexPoint to_chart(const ComplexPoint& p, int from, int to);

// Chart whose coordinates of the given point have the smallest max-norm.
int best_chart(const ComplexPoint& p, int from);

} // namespace fol
