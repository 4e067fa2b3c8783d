#include "fol/singularity.hpp"

#include <algorithm>
#include <cmath>

namespace fol {

namespace {
const std::vector<std::string> kZW = {"z", "w"};
}

Mat2 Mat2::inverse() const {
    cplx dd = det();
    if (std::abs(dd) == 0.0) throw Error("degenerate-singularity", "singular 2x2 matrix");
    return {d / dd, -b / dd, -c / dd, a / dd};
}

LambdaResult lambda_of(const Mat2& m) {
    cplx tr = m.tr();
    cplx disc = tr * tr - 4.0 * m.det();
    cplx rt = std::sqrt(disc);
    cplx mu1 = 0.5 * (tr + rt);
    cplx mu2 = 0.5 * (tr - rt);
    // evaluate the smaller root from the product for accuracy
    if (std::abs(mu1) >= std::abs(mu2) && std::abs(mu1) > 0.0) mu2 = m.det() / mu1;
    else if (std::abs(mu2) > 0.0) mu1 = m.det() / mu2;

    double scale = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
    if (std::abs(mu1) < 1e-12 * scale || std::abs(mu2) < 1e-12 * scale)
        throw Error("degenerate-singularity", "zero eigenvalue");
    if (std::abs(mu1 - mu2) < 1e-9 * scale) {
        // equal eigenvalues: semisimple only if the matrix is already scalar
        double off = std::max(std::abs(m.b), std::abs(m.c));
        double diag = std::abs(m.a - m.d);
        if (off > 1e-9 * scale || diag > 1e-9 * scale)
            throw Error("non-semisimple", "defective linear part");
    }
    LambdaResult r;
    r.mu1 = mu1;
    r.mu2 = mu2;
    r.lambda = mu2 / mu1;
    if (r.lambda.imag() < 0.0 ||
        (std::abs(r.lambda.imag()) < 1e-15 * std::abs(r.lambda) && std::abs(r.lambda) < 1.0)) {
        std::swap(r.mu1, r.mu2);
        r.lambda = 1.0 / r.lambda;
    }
    return r;
}

std::string to_string(SingClass c) {
    switch (c) {
        case SingClass::hyperbolic: return "hyperbolic";
        case SingClass::resonant_real: return "resonant-real";
        default: return "degenerate";
    }
}

SingClass classify_hyperbolic(cplx lambda, double tol_im) {
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()) ||
        std::abs(lambda) < 1e-12)
        return SingClass::degenerate;
    if (std::abs(lambda.imag()) > tol_im) return SingClass::hyperbolic;
    return SingClass::resonant_real;
}

NormalizedLambda normalize_lambda(cplx lambda, double guard) {
    if (std::abs(lambda.imag()) == 0.0)
        throw Error("degenerate-singularity", "normalize_lambda needs Im(lambda) != 0");
    NormalizedLambda out;
    out.lambda = lambda;
    if (std::abs(out.lambda.real() - 1.0) < guard) {
        out.lambda = 1.0 / out.lambda;
        out.moves.push_back("swap-axes");
    }
    if (out.lambda.imag() < 0.0) {
        cplx swapped = 1.0 / out.lambda;
        if (std::abs(swapped.real() - 1.0) >= guard) {
            out.lambda = swapped;
            out.moves.push_back("swap-axes");
        } else {
            out.note = "kept Im < 0: swapping back would put Re(lambda) in the a=1 guard band";
        }
    }
    return out;
}

Mat2 linear_part(const FoliationForm& f, int chart, const ComplexPoint& p) {
    if (p.size() != 2) throw Error("arity", "chart point must have 2 coordinates");
    const ChartForm& cf = f.chart(chart);
    double scale = std::max(1.0, std::max(cf.alpha.coeff_norm(), cf.beta.coeff_norm()));
    double res = std::max(std::abs(cf.alpha.eval(p)), std::abs(cf.beta.eval(p)));
    if (res >= 1e-6 * scale)
        throw Error("not-singular", "linear_part needs a singular point");
    // X = (beta, -alpha)
    Poly Xz = cf.beta, Xw = -cf.alpha;
    return {Xz.derivative(0).eval(p), Xz.derivative(1).eval(p),
            Xw.derivative(0).eval(p), Xw.derivative(1).eval(p)};
}

std::array<cplx, 2> LinearizingJet::apply_forward(cplx z, cplx w) const {
    return {forward.first.eval({z, w}), forward.second.eval({z, w})};
}

std::array<cplx, 2> LinearizingJet::apply_inverse(cplx z, cplx w) const {
    return {inverse.first.eval({z, w}), inverse.second.eval({z, w})};
}

namespace {

using PolyPair = std::pair<Poly, Poly>;

PolyPair compose_pair(const PolyPair& outer, const PolyPair& inner, int k) {
    std::vector<Poly> img = {inner.first, inner.second};
    return {outer.first.compose(img, k), outer.second.compose(img, k)};
}

// series inverse of T = id + higher order: S with T(S) = id mod degree k
PolyPair series_inverse(const PolyPair& t, int k) {
    Poly z = Poly::variable(kZW, "z");
    Poly w = Poly::variable(kZW, "w");
    PolyPair n = {t.first - z, t.second - w};
    PolyPair s = {z, w};
    for (int it = 0; it < k; ++it) {
        PolyPair ns = compose_pair(n, s, k);
        s = {z - ns.first, w - ns.second};
    }
    return s;
}

// field pushforward under y = x + H(x):  (I + DH)^{-1} G(x + H(x))
PolyPair push_field(const PolyPair& field, const PolyPair& h, int k) {
    Poly z = Poly::variable(kZW, "z");
    Poly w = Poly::variable(kZW, "w");
    PolyPair gofh = compose_pair(field, {z + h.first, w + h.second}, k);
    Poly h11 = h.first.derivative(0), h12 = h.first.derivative(1);
    Poly h21 = h.second.derivative(0), h22 = h.second.derivative(1);
    Poly r1 = gofh.first, r2 = gofh.second;
    Poly acc1 = gofh.first, acc2 = gofh.second;
    for (int i = 1; i <= k; ++i) {
        Poly n1 = (-(h11 * acc1 + h12 * acc2)).truncated(k);
        Poly n2 = (-(h21 * acc1 + h22 * acc2)).truncated(k);
        acc1 = n1;
        acc2 = n2;
        if (acc1.is_zero() && acc2.is_zero()) break;
        r1 = r1 + acc1;
        r2 = r2 + acc2;
    }
    return {r1.truncated(k), r2.truncated(k)};
}

} // namespace

LinearizingJet linearize_jet(const FoliationForm& f, int chart, const ComplexPoint& p,
                             int order) {
    if (order < 1) throw Error("arity", "jet order must be >= 1");
    Mat2 m = linear_part(f, chart, p);
    LambdaResult lr = lambda_of(m);
    if (classify_hyperbolic(lr.lambda) != SingClass::hyperbolic)
        throw Error("resonance", "jet requires a hyperbolic eigenvalue ratio");

    auto eigvec = [&](cplx mu) -> std::array<cplx, 2> {
        // rows of (M - mu I) are proportional; use the better-conditioned one
        cplx r1x = m.a - mu, r1y = m.b;
        cplx r2x = m.c, r2y = m.d - mu;
        std::array<cplx, 2> v;
        if (std::abs(r1x) + std::abs(r1y) >= std::abs(r2x) + std::abs(r2y))
            v = {-r1y, r1x};
        else
            v = {-r2y, r2x};
        double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
        if (n == 0.0) return {1.0, 0.0};
        cplx big = std::abs(v[0]) >= std::abs(v[1]) ? v[0] : v[1];
        cplx ph = big / std::abs(big);
        return {v[0] / (n * ph), v[1] / (n * ph)};
    };
    auto v1 = eigvec(lr.mu1), v2 = eigvec(lr.mu2);
    Mat2 P = {v1[0], v2[0], v1[1], v2[1]};
    if (std::abs(P.det()) < 1e-9) throw Error("non-semisimple", "eigenvector matrix singular");
    Mat2 Pi = P.inverse();

    // Taylor field at p in eigencoordinates, exact truncation of a polynomial field
    const ChartForm& cf = f.chart(chart);
    Poly z = Poly::variable(kZW, "z");
    Poly w = Poly::variable(kZW, "w");
    Poly lz = Poly::constant(kZW, p[0]) + z * P.a + w * P.b;
    Poly lw = Poly::constant(kZW, p[1]) + z * P.c + w * P.d;
    std::vector<Poly> into = {lz, lw};
    Poly Xz = cf.beta.compose(into, order);
    Poly Xw = (-cf.alpha).compose(into, order);
    PolyPair g = {(Xz * Pi.a + Xw * Pi.b).truncated(order),
                  (Xz * Pi.c + Xw * Pi.d).truncated(order)};

    const double divisor_floor = 1e-9 * (std::abs(lr.mu1) + std::abs(lr.mu2));

    PolyPair inverse_eig = {z, w}; // linearized -> eigen coordinates
    for (int deg = 2; deg <= order; ++deg) {
        PolyPair h = {Poly(kZW), Poly(kZW)};
        for (int comp = 0; comp < 2; ++comp) {
            const Poly& gp = comp == 0 ? g.first : g.second;
            Poly& hp = comp == 0 ? h.first : h.second;
            cplx mu_j = comp == 0 ? lr.mu1 : lr.mu2;
            for (const auto& [e, c] : gp.terms()) {
                if (e[0] + e[1] != deg) continue;
                cplx div = static_cast<double>(e[0]) * lr.mu1 +
                           static_cast<double>(e[1]) * lr.mu2 - mu_j;
                if (std::abs(div) < divisor_floor)
                    throw Error("resonance", "homological divisor below tolerance");
                hp.add_term(e, c / div);
            }
        }
        if (!h.first.is_zero() || !h.second.is_zero()) {
            g = push_field(g, h, order);
            PolyPair step = {z + h.first, w + h.second};
            inverse_eig = compose_pair(inverse_eig, step, order);
        }
    }

    double resid;
    {
        Poly d1 = g.first - z * lr.mu1;
        Poly d2 = g.second - w * lr.mu2;
        resid = std::max(d1.coeff_norm(), d2.coeff_norm());
    }

    LinearizingJet jet;
    jet.order = order;
    jet.mu1 = lr.mu1;
    jet.mu2 = lr.mu2;
    jet.conj_residual = resid;
    // inverse: linearized x -> local displacement xi = P * inverse_eig(x)
    jet.inverse = {(inverse_eig.first * P.a + inverse_eig.second * P.b).truncated(order),
                   (inverse_eig.first * P.c + inverse_eig.second * P.d).truncated(order)};
    // forward: series-invert the eigen map and precompose with Pi
    PolyPair fwd_eig = series_inverse(inverse_eig, order);
    PolyPair pixi = {z * Pi.a + w * Pi.b, z * Pi.c + w * Pi.d};
    jet.forward = compose_pair(fwd_eig, pixi, order);
    return jet;
}

std::vector<HyperbolicSingularity> classify_singularities(const FoliationForm& f, int chart) {
    auto set = singular_points(f, chart);
    std::vector<HyperbolicSingularity> out;
    for (const auto& sp : set.points) {
        HyperbolicSingularity h;
        h.location = sp.location;
        if (sp.flag == PointFlag::degenerate) {
            h.cls = SingClass::degenerate;
            out.push_back(h);
            continue;
        }
        h.linear = linear_part(f, chart, sp.location);
        try {
            LambdaResult lr = lambda_of(h.linear);
            h.lambda_raw = lr.lambda;
            h.cls = classify_hyperbolic(lr.lambda);
            if (h.cls == SingClass::hyperbolic) {
                auto nl = normalize_lambda(lr.lambda);
                h.lambda = nl.lambda;
                h.moves = nl.moves;
            } else {
                h.lambda = lr.lambda;
            }
        } catch (const Error&) {
            h.cls = SingClass::degenerate;
        }
        out.push_back(h);
    }
    return out;
}

} // namespace fol
