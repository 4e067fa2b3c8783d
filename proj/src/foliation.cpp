#include "fol/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fol/rng.hpp"

namespace fol {

namespace {
const std::vector<std::string> kX = {"x1", "x2", "x3"};
const std::vector<std::string> kZW = {"z", "w"};
} // namespace

FastPoly2::FastPoly2(const Poly& p) {
    if (p.vars().size() != 2) throw Error("arity", "FastPoly2 needs a bivariate polynomial");
    dz = std::max(p.degree_in(0), 0);
    dw = std::max(p.degree_in(1), 0);
    c.assign(static_cast<size_t>((dz + 1) * (dw + 1)), 0.0);
    for (const auto& [e, v] : p.terms())
        c[static_cast<size_t>(e[0] * (dw + 1) + e[1])] = v;
}

cplx FastPoly2::eval(cplx z, cplx w) const {
    if (c.empty()) return 0.0;
    cplx r = 0.0;
    for (int i = dz; i >= 0; --i) {
        cplx row = 0.0;
        const cplx* base = c.data() + static_cast<size_t>(i * (dw + 1));
        for (int j = dw; j >= 0; --j) row = row * w + base[j];
        r = r * z + row;
    }
    return r;
}

const ChartForm& FoliationForm::chart(int k) const {
    if (k < 0 || k >= kNumCharts) throw Error("bad-chart", "chart id must be 0, 1 or 2");
    return charts_[static_cast<size_t>(k)];
}

namespace {

Poly restrict_chart(const Poly& a, int chart_id) {
    // chart 0: (x1,x2,x3) = (z,w,1); chart 1: (1,z,w); chart 2: (w,1,z)
    Poly z = Poly::variable(kZW, "z");
    Poly w = Poly::variable(kZW, "w");
    Poly one = Poly::constant(kZW, 1.0);
    std::vector<Poly> img;
    switch (chart_id) {
        case 0: img = {z, w, one}; break;
        case 1: img = {one, z, w}; break;
        default: img = {w, one, z}; break;
    }
    return a.compose(img);
}

bool all_divisible_by(const Poly& p, int var) {
    for (const auto& [e, c] : p.terms()) {
        (void)c;
        if (e[static_cast<size_t>(var)] < 1) return false;
    }
    return true;
}

Poly divide_by_var(const Poly& p, int var) {
    Poly r(p.vars());
    for (const auto& [e, c] : p.terms()) {
        auto ee = e;
        ee[static_cast<size_t>(var)] -= 1;
        r.add_term(ee, c);
    }
    return r;
}

// Restrict a trivariate polynomial to the parametrized line x = p + t*q.
Poly restrict_to_line(const Poly& a, const std::array<cplx, 3>& p,
                      const std::array<cplx, 3>& q) {
    const std::vector<std::string> T = {"t"};
    Poly t = Poly::variable(T, "t");
    std::vector<Poly> img;
    for (int i = 0; i < 3; ++i)
        img.push_back(Poly::constant(T, p[static_cast<size_t>(i)]) +
                      t * q[static_cast<size_t>(i)]);
    return a.compose(img);
}

bool common_root_on_line(const Poly& a1, const Poly& a2, const Poly& a3,
                         const std::array<cplx, 3>& p, const std::array<cplx, 3>& q) {
    Poly r1 = restrict_to_line(a1, p, q);
    Poly r2 = restrict_to_line(a2, p, q);
    Poly r3 = restrict_to_line(a3, p, q);
    // a zero restriction vanishes at every root of the others
    std::vector<const Poly*> nonzero;
    for (const Poly* r : {&r1, &r2, &r3})
        if (r->coeff_norm() > 1e-14) nonzero.push_back(r);
    if (nonzero.empty()) return true;
    const Poly& lead = *nonzero[0];
    if (lead.degree() < 1) return false; // nonzero constant: no roots at all
    auto roots = univariate_roots(lead, 0);
    for (const auto& r : roots) {
        bool common = true;
        for (size_t i = 1; i < nonzero.size(); ++i) {
            double scale = nonzero[i]->coeff_norm() *
                           std::pow(1.0 + std::abs(r), nonzero[i]->degree());
            if (std::abs(nonzero[i]->eval({r})) > 1e-8 * scale) {
                common = false;
                break;
            }
        }
        if (common) return true;
    }
    return false;
}

} // namespace

FoliationForm make_foliation(const Poly& a1, const Poly& a2, const Poly& a3) {
    std::array<Poly, 3> a = {a1, a2, a3};
    int delta = -1;
    for (const auto& p : a) {
        if (p.vars() != kX)
            throw Error("arity", "coefficients must use variables (x1, x2, x3)");
        if (!p.is_homogeneous())
            throw Error("not-projective-form", "coefficients must be homogeneous");
        if (!p.is_zero()) delta = std::max(delta, p.degree());
    }
    if (delta < 2) throw Error("not-projective-form", "coefficient degree must be >= 2");
    for (const auto& p : a)
        if (!p.is_zero() && p.degree() != delta)
            throw Error("not-projective-form", "coefficients must share one degree");

    // Common-factor test precedes the Euler test: a factor of positive degree
    // leaves a joint root on both of two fixed generic lines.
    const std::array<cplx, 3> p1 = {cplx(0.31, -0.12), cplx(-0.77, 0.41), cplx(0.52, 0.18)};
    const std::array<cplx, 3> q1 = {cplx(0.91, 0.23), cplx(0.45, -0.66), cplx(-0.37, 0.82)};
    const std::array<cplx, 3> p2 = {cplx(-0.58, 0.34), cplx(0.21, 0.73), cplx(0.64, -0.27)};
    const std::array<cplx, 3> q2 = {cplx(0.17, -0.93), cplx(-0.81, 0.29), cplx(0.55, 0.48)};
    if (common_root_on_line(a[0], a[1], a[2], p1, q1) &&
        common_root_on_line(a[0], a[1], a[2], p2, q2))
        throw Error("non-reduced", "coefficients share a polynomial factor");

    // Euler condition at 200 pseudo-random points
    Poly radial(kX);
    {
        Poly x1 = Poly::variable(kX, "x1"), x2 = Poly::variable(kX, "x2"),
             x3 = Poly::variable(kX, "x3");
        radial = x1 * a[0] + x2 * a[1] + x3 * a[2];
    }
    double coeff_scale =
        std::max({1.0, a[0].coeff_norm(), a[1].coeff_norm(), a[2].coeff_norm()});
    Rng rng(0x45756c6572ull);
    for (int t = 0; t < 200; ++t) {
        ComplexPoint x = {rng.complex_gaussian(), rng.complex_gaussian(),
                          rng.complex_gaussian()};
        double nx = std::sqrt(std::norm(x[0]) + std::norm(x[1]) + std::norm(x[2]));
        if (nx < 1e-3) continue;
        double res = std::abs(radial.eval(x));
        if (res > 1e-10 * coeff_scale * std::pow(nx, delta + 1))
            throw Error("not-projective-form", "Euler condition violated");
    }

    FoliationForm f;
    f.a_ = a;
    f.degree_d_ = delta - 1;
    for (int k = 0; k < 3; ++k) {
        ChartForm cf;
        switch (k) {
            case 0:
                cf.alpha = restrict_chart(a[0], 0);
                cf.beta = restrict_chart(a[1], 0);
                break;
            case 1:
                cf.alpha = restrict_chart(a[1], 1);
                cf.beta = restrict_chart(a[2], 1);
                break;
            default:
                cf.alpha = restrict_chart(a[2], 2);
                cf.beta = restrict_chart(a[0], 2);
                break;
        }
        cf.alpha_f = FastPoly2(cf.alpha);
        cf.beta_f = FastPoly2(cf.beta);
        f.charts_[static_cast<size_t>(k)] = cf;
    }
    return f;
}

std::array<Poly, 3> homogenize_chart0(const Poly& alpha, const Poly& beta) {
    if (alpha.vars() != kZW || beta.vars() != kZW)
        throw Error("arity", "chart form must use variables (z, w)");
    int D = std::max(alpha.degree(), beta.degree());
    auto lift = [&](const Poly& p) {
        Poly h(kX);
        for (const auto& [e, c] : p.terms())
            h.add_term({e[0], e[1], D - e[0] - e[1]}, c);
        return h;
    };
    Poly ah = lift(alpha), bh = lift(beta);
    Poly x1 = Poly::variable(kX, "x1"), x2 = Poly::variable(kX, "x2"),
         x3 = Poly::variable(kX, "x3");
    std::array<Poly, 3> a = {x3 * ah, x3 * bh, -(x1 * ah + x2 * bh)};
    while (!a[0].is_zero() || !a[1].is_zero() || !a[2].is_zero()) {
        bool div = true;
        for (const auto& p : a)
            if (!p.is_zero() && !all_divisible_by(p, 2)) div = false;
        if (!div) break;
        for (auto& p : a) p = divide_by_var(p, 2);
    }
    return a;
}

FoliationForm preset_linear(cplx lambda) {
    // affine model z dw - lambda w dz, homogenized
    Poly a1(kX), a2(kX), a3(kX);
    a1.add_term({0, 1, 1}, -lambda);
    a2.add_term({1, 0, 1}, 1.0);
    a3.add_term({1, 1, 0}, lambda - 1.0);
    return make_foliation(a1, a2, a3);
}

FoliationForm preset_jouanolou(int d) {
    if (d < 2) throw Error("bad-preset", "jouanolou needs d >= 2");
    Poly a1(kX), a2(kX), a3(kX);
    a1.add_term({d, 1, 0}, 1.0);
    a1.add_term({0, 0, d + 1}, -1.0);
    a2.add_term({0, d, 1}, 1.0);
    a2.add_term({d + 1, 0, 0}, -1.0);
    a3.add_term({1, 0, d}, 1.0);
    a3.add_term({0, d + 1, 0}, -1.0);
    return make_foliation(a1, a2, a3);
}

FoliationForm preset_random(int d, std::uint64_t seed) {
    if (d < 1) throw Error("bad-preset", "random needs d >= 1");
    const int delta = d + 1;
    Rng rng(seed);
    std::array<Poly, 3> a = {Poly(kX), Poly(kX), Poly(kX)};
    for (auto& p : a)
        for (int i = 0; i <= delta; ++i)
            for (int j = 0; i + j <= delta; ++j)
                p.add_term({i, j, delta - i - j}, rng.complex_gaussian());
    // project onto the Euler subspace: subtract the radial component
    Poly x1 = Poly::variable(kX, "x1"), x2 = Poly::variable(kX, "x2"),
         x3 = Poly::variable(kX, "x3");
    Poly g = x1 * a[0] + x2 * a[1] + x3 * a[2];
    double inv = 1.0 / (delta + 1);
    a[0] = a[0] - g.derivative(0) * inv;
    a[1] = a[1] - g.derivative(1) * inv;
    a[2] = a[2] - g.derivative(2) * inv;
    return make_foliation(a[0], a[1], a[2]);
}

FoliationForm preset_by_name(const std::string& spec) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(item);
        return out;
    };
    if (name == "linear") {
        auto parts = split(args);
        if (parts.empty()) throw Error("bad-preset", "linear needs lambda as RE,IM");
        double re = std::stod(parts[0]);
        double im = parts.size() > 1 ? std::stod(parts[1]) : 0.0;
        return preset_linear(cplx(re, im));
    }
    if (name == "jouanolou") {
        if (args.empty()) throw Error("bad-preset", "jouanolou needs a degree");
        return preset_jouanolou(std::stoi(args));
    }
    if (name == "random") {
        auto parts = split(args);
        if (parts.size() < 2) throw Error("bad-preset", "random needs degree,seed");
        return preset_random(std::stoi(parts[0]),
                             static_cast<std::uint64_t>(std::stoull(parts[1])));
    }
    throw Error("bad-preset", "unknown preset " + name);
}

double euler_residual(const FoliationForm& f, const ComplexPoint& x) {
    if (x.size() != 3) throw Error("arity", "need 3 homogeneous coordinates");
    cplx s = x[0] * f.a(0).eval(x) + x[1] * f.a(1).eval(x) + x[2] * f.a(2).eval(x);
    double nx = std::sqrt(std::norm(x[0]) + std::norm(x[1]) + std::norm(x[2]));
    if (nx == 0.0) return 0.0;
    return std::abs(s) / std::pow(nx, f.coeff_degree() + 1);
}

std::vector<SingularPoint> find_common_zeros(const Poly& alpha, const Poly& beta,
                                             double box_radius) {
    double anorm = alpha.coeff_norm(), bnorm = beta.coeff_norm();
    if (anorm == 0.0 && bnorm == 0.0)
        throw Error("positive-dimensional-singularity", "both components vanish identically");
    if (anorm == 0.0 || bnorm == 0.0) {
        const Poly& nz = anorm == 0.0 ? beta : alpha;
        if (nz.degree() >= 1)
            throw Error("positive-dimensional-singularity", "zero locus contains a curve");
        return {};
    }
    if (alpha.degree() == 0 || beta.degree() == 0) return {};

    int dwa = alpha.degree_in(1), dwb = beta.degree_in(1);
    std::vector<cplx> zcand;
    if (dwa >= 1 && dwb >= 1) {
        auto rr = resultant_eliminate(alpha, beta, "w");
        double rscale = std::pow(std::max(anorm, bnorm), dwa + dwb);
        if (rr.value.coeff_norm() <= 1e-10 * std::max(1.0, rscale))
            throw Error("positive-dimensional-singularity", "resultant vanishes identically");
        if (rr.value.degree() >= 1) zcand = univariate_roots(rr.value, 0);
    } else {
        // one component does not involve w: its z-roots are the only candidates
        const Poly& zonly = dwa < 1 ? alpha : beta;
        if (zonly.degree_in(0) >= 1) zcand = univariate_roots(zonly, 0);
    }

    std::vector<SingularPoint> found;
    auto consider = [&](cplx z0, cplx w0) {
        if (std::abs(z0) > 2 * box_radius || std::abs(w0) > 2 * box_radius) return;
        ComplexPoint p = {z0, w0};
        PointFlag flag = PointFlag::simple;
        try {
            p = newton_polish({alpha, beta}, p, 1e-10);
        } catch (const Error& e) {
            if (e.code() == "jacobian-singular")
                flag = PointFlag::degenerate;
            else
                return;
        }
        double res = std::max(std::abs(alpha.eval(p)), std::abs(beta.eval(p)));
        double tol = 1e-8 * std::max(1.0, std::max(anorm, bnorm));
        if (res > tol) return;
        if (std::max(std::abs(p[0]), std::abs(p[1])) > box_radius) return;
        for (const auto& q : found)
            if (std::abs(q.location[0] - p[0]) + std::abs(q.location[1] - p[1]) < 1e-7) return;
        found.push_back({{p[0], p[1]}, res, flag});
    };

    for (const auto& z0 : zcand) {
        if (std::abs(z0) > 2 * box_radius) continue;
        std::vector<cplx> wcand;
        for (const Poly* comp : {&alpha, &beta}) {
            Poly slice = comp->substitute(0, z0); // univariate in w
            if (slice.degree_in(0) >= 1) {
                auto ws = univariate_roots(slice, 0);
                wcand.insert(wcand.end(), ws.begin(), ws.end());
            }
        }
        double slice_scale =
            std::max(anorm, bnorm) *
            std::pow(1.0 + std::abs(z0), std::max(alpha.degree(), beta.degree()));
        for (const auto& w0 : wcand) {
            double pre =
                std::max(std::abs(alpha.eval({z0, w0})), std::abs(beta.eval({z0, w0})));
            if (pre < 1e-4 * std::max(1.0, slice_scale)) consider(z0, w0);
        }
    }
    std::sort(found.begin(), found.end(), [](const SingularPoint& a, const SingularPoint& b) {
        if (a.location[0].real() != b.location[0].real())
            return a.location[0].real() < b.location[0].real();
        return a.location[0].imag() < b.location[0].imag();
    });
    return found;
}

SingularPointSet singular_points(const FoliationForm& f, int chart, double box_radius) {
    const ChartForm& cf = f.chart(chart);
    SingularPointSet s;
    s.chart = chart;
    s.points = find_common_zeros(cf.alpha, cf.beta, box_radius);
    return s;
}

ComplexPoint to_chart(const ComplexPoint& p, int from, int to) {
    if (p.size() != 2) throw Error("arity", "chart point must have 2 coordinates");
    std::array<cplx, 3> h;
    switch (from) {
        case 0: h = {p[0], p[1], 1.0}; break;
        case 1: h = {1.0, p[0], p[1]}; break;
        case 2: h = {p[1], 1.0, p[0]}; break;
        default: throw Error("bad-chart", "chart id must be 0, 1 or 2");
    }
    cplx den;
    switch (to) {
        case 0: den = h[2]; break;
        case 1: den = h[0]; break;
        case 2: den = h[1]; break;
        default: throw Error("bad-chart", "chart id must be 0, 1 or 2");
    }
    if (std::abs(den) < 1e-300) throw Error("bad-chart", "point at infinity in target chart");
    switch (to) {
        case 0: return {h[0] / den, h[1] / den};
        case 1: return {h[1] / den, h[2] / den};
        default: return {h[2] / den, h[0] / den};
    }
}

int best_chart(const ComplexPoint& p, int from) {
    std::array<cplx, 3> h;
    switch (from) {
        case 0: h = {p[0], p[1], 1.0}; break;
        case 1: h = {1.0, p[0], p[1]}; break;
        case 2: h = {p[1], 1.0, p[0]}; break;
        default: throw Error("bad-chart", "chart id must be 0, 1 or 2");
    }
    double m0 = std::abs(h[2]), m1 = std::abs(h[0]), m2 = std::abs(h[1]);
    if (m0 >= m1 && m0 >= m2) return 0;
    if (m1 >= m2) return 1;
    return 2;
}

} // namespace fol
