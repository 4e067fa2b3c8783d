#include "fol/harmonic.hpp"

#include <algorithm>
#include <cmath>

#include "fol/error.hpp"
#include "fol/quadrature.hpp"

namespace fol {

BoundaryFunction BoundaryFunction::from_samples(std::vector<std::pair<double, double>> samples,
                                                TailModel tail, double decay_exponent,
                                                std::string tag) {
    if (samples.empty()) throw Error("arity", "boundary data needs at least one sample");
    for (size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].second < 0.0)
            throw Error("arity", "boundary values must be nonnegative");
        if (i > 0 && !(samples[i].first > samples[i - 1].first))
            throw Error("arity", "sample abscissae must be strictly increasing");
    }
    BoundaryFunction b;
    b.samples_ = std::move(samples);
    b.tail_ = tail;
    b.decay_q_ = tail == TailModel::zero_beyond ? 0.0 : decay_exponent;
    b.lo_ = b.samples_.front().first;
    b.hi_ = b.samples_.back().first;
    b.tag_ = std::move(tag);
    return b;
}

BoundaryFunction BoundaryFunction::from_function(std::function<double(double)> f,
                                                 double decay_exponent, std::string tag) {
    BoundaryFunction b;
    b.fn_ = std::move(f);
    b.tail_ = TailModel::power_decay;
    b.decay_q_ = decay_exponent;
    b.lo_ = -1.0;
    b.hi_ = 1.0;
    b.tag_ = std::move(tag);
    return b;
}

BoundaryFunction BoundaryFunction::constant(double value) {
    if (value < 0.0) throw Error("arity", "boundary values must be nonnegative");
    return from_function([value](double) { return value; }, 0.0, "constant");
}

BoundaryFunction BoundaryFunction::indicator(double lo, double hi) {
    return from_samples({{lo, 1.0}, {hi, 1.0}}, TailModel::zero_beyond, 0.0, "indicator");
}

double BoundaryFunction::operator()(double x) const {
    if (fn_) {
        if (std::isinf(x)) {
            if (decay_q_ > 0.0) return 0.0;
            if (decay_q_ == 0.0) return fn_(x > 0 ? 1e300 : -1e300);
            return std::numeric_limits<double>::infinity();
        }
        return fn_(x);
    }
    if (x < lo_ || x > hi_ || std::isinf(x)) {
        if (tail_ == TailModel::zero_beyond) return 0.0;
        const auto& edge = x < lo_ ? samples_.front() : samples_.back();
        double se = 1.0 + std::abs(edge.first);
        double sx = 1.0 + std::abs(x);
        return edge.second * std::pow(se / sx, decay_q_);
    }
    auto it = std::lower_bound(samples_.begin(), samples_.end(), x,
                               [](const auto& s, double v) { return s.first < v; });
    if (it == samples_.begin()) return it->second;
    if (it == samples_.end()) return samples_.back().second;
    const auto& [x1, v1] = *it;
    const auto& [x0, v0] = *(it - 1);
    double t = (x - x0) / (x1 - x0);
    return v0 + t * (v1 - v0);
}

double poisson_extend(const BoundaryFunction& h, HalfPlanePoint p, double tol) {
    if (!(p.V > 0.0)) throw Error("arity", "Poisson extension needs V > 0");
    if (!h.compact_support() && h.decay_exponent() <= -1.0)
        throw Error("divergent-boundary-data", "boundary data grows too fast");
    const double half = 0.5 * kPi;
    auto integrand = [&](double s) { return h(p.U + p.V * std::tan(s)); };
    auto q = integrate_adaptive(integrand, -half, half, tol);
    return q.value / kPi;
}

namespace {

// integral of H(x) (1+|x|)^{1/gamma-1} over [a, b]
double weighted_piece(const BoundaryFunction& h, double expnt, double a, double b,
                      double tol) {
    auto f = [&](double x) { return h(x) * std::pow(1.0 + std::abs(x), expnt); };
    return integrate_adaptive(f, a, b, tol).value;
}

// dyadic panels from x = start in direction dir (+1/-1), closed by the
// asymptotic power law h ~ h(edge) (s_edge/s_x)^q
double weighted_tail(const BoundaryFunction& h, double expnt, double start, double dir,
                     double gamma, double q, double tol) {
    double total = 0.0;
    double edge = start;
    double width = 1.0;
    for (int k = 0; k < 48; ++k) {
        double next = edge + dir * width;
        double piece = weighted_piece(h, expnt, std::min(edge, next), std::max(edge, next), tol);
        total += piece;
        edge = next;
        width *= 2.0;
        if (std::abs(edge) > 1e4 && std::abs(piece) < tol) break;
        if (std::abs(edge) > 1e12) break;
    }
    double sR = 1.0 + std::abs(edge);
    total += h(edge) * std::pow(sR, 1.0 / gamma) / (q - 1.0 / gamma);
    return total;
}

} // namespace

double weighted_norm(const BoundaryFunction& h, double gamma, double tol) {
    if (!(gamma > 1.0)) throw Error("arity", "weighted norm needs gamma > 1");
    const double expnt = 1.0 / gamma - 1.0; // in (-1, 0)
    const double q = h.decay_exponent();
    if (!h.compact_support() && q <= 1.0 / gamma)
        throw Error("divergent-boundary-data", "tail decay too slow for the weighted norm");

    double total = 0.0;
    if (h.sampled()) {
        const auto& s = h.samples();
        double left = s.front().first, right = s.back().first;
        std::vector<double> cuts = {left};
        for (size_t i = 1; i < s.size(); ++i) cuts.push_back(s[i].first);
        if (left < 0.0 && right > 0.0)
            cuts.insert(std::upper_bound(cuts.begin(), cuts.end(), 0.0), 0.0);
        for (size_t i = 0; i + 1 < cuts.size(); ++i)
            total += weighted_piece(h, expnt, cuts[i], cuts[i + 1],
                                    tol / static_cast<double>(cuts.size()));
        if (!h.compact_support()) {
            total += weighted_tail(h, expnt, right, +1.0, gamma, q, tol * 1e-2);
            total += weighted_tail(h, expnt, left, -1.0, gamma, q, tol * 1e-2);
        }
        return total;
    }

    total += weighted_piece(h, expnt, -1.0, 1.0, tol * 1e-2);
    total += weighted_tail(h, expnt, 1.0, +1.0, gamma, q, tol * 1e-2);
    total += weighted_tail(h, expnt, -1.0, -1.0, gamma, q, tol * 1e-2);
    return total;
}

double sector_harmonic_value(const BoundaryFunction& h, const SectorChart& chart, cplx zeta,
                             double tol) {
    auto uv = chart.to_halfplane(zeta); // throws outside-sector beyond the edges
    double scale = std::max(1.0, std::abs(uv[0]));
    if (uv[1] <= 1e-12 * scale)
        throw Error("on-boundary", "zeta lies on a sector edge");
    return poisson_extend(h, {uv[0], uv[1]}, tol);
}

double harmonic_residual(const std::function<double(double, double)>& F,
                         const std::function<bool(double, double)>& domain, double x, double y,
                         double h) {
    if (!(h > 0.0)) throw Error("arity", "stencil step must be positive");
    const double pts[5][2] = {{x, y}, {x + h, y}, {x - h, y}, {x, y + h}, {x, y - h}};
    for (const auto& p : pts)
        if (!domain(p[0], p[1]))
            throw Error("stencil", "5-point stencil leaves the domain");
    double mean = 0.25 * (F(x + h, y) + F(x - h, y) + F(x, y + h) + F(x, y - h));
    return std::abs(F(x, y) - mean) / (h * h);
}

double KernelMix::boundary(double x) const { return extend(x, 0.0); }

double KernelMix::extend(double U, double V) const {
    double s = offset;
    for (const auto& b : bumps) {
        double tv = b.t + V;
        double dx = U - b.x0;
        s += b.c * tv / (dx * dx + tv * tv);
    }
    return s;
}

std::array<double, 2> KernelMix::gradient(double U, double V) const {
    double gu = 0.0, gv = 0.0;
    for (const auto& b : bumps) {
        double tv = b.t + V;
        double dx = U - b.x0;
        double den = dx * dx + tv * tv;
        gu += b.c * (-2.0 * dx * tv) / (den * den);
        gv += b.c * (dx * dx - tv * tv) / (den * den);
    }
    return {gu, gv};
}

BoundaryFunction KernelMix::as_boundary() const {
    KernelMix copy = *this;
    double q = copy.offset > 0.0 ? 0.0 : 2.0;
    return BoundaryFunction::from_function([copy](double x) { return copy.boundary(x); }, q,
                                           "kernel-mix");
}

} // namespace fol
