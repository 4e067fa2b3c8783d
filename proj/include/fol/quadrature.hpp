#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace fol {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    std::size_t evals = 0;
};

namespace detail {

// Gauss7-Kronrod15 pair on [-1,1], positive abscissae
inline constexpr double kKronrodX[8] = {
    0.0,
    0.2077849550078984676006894037732449,
    0.4058451513773971669066064120769615,
    0.5860872354676911302941448382587296,
    0.7415311855993944398638647732807884,
    0.8648644233597690727897127886409262,
    0.9491079123427585245261896840478513,
    0.9914553711208126392068546975263285};
inline constexpr double kKronrodW[8] = {
    0.2094821410847278280129991748917143,
    0.2044329400752988924141619992346491,
    0.1903505780647854099132564024210137,
    0.1690047266392679028265834265985503,
    0.1406532597155259187451895905102379,
    0.1047900103222501838398763225415180,
    0.0630920926299785532907006631892043,
    0.0229353220105292249637320080589695};
inline constexpr double kGaussW[4] = {
    0.4179591836734693877551020408163265,
    0.3818300505051189449503697754889751,
    0.2797053914892766679014677714237796,
    0.1294849661688696932706114326790820};

template <class F>
void gk15(const F& f, double a, double b, double& k, double& g, std::size_t& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    k = kKronrodW[0] * fc;
    g = kGaussW[0] * fc;
    for (int i = 1; i < 8; ++i) {
        double x = h * kKronrodX[i];
        double fl = f(c - x), fr = f(c + x);
        k += kKronrodW[i] * (fl + fr);
        if (i % 2 == 0) g += kGaussW[i / 2] * (fl + fr);
    }
    k *= h;
    g *= h;
    evals += 15;
}

template <class F>
void adapt(const F& f, double a, double b, double tol, int depth, QuadResult& out) {
    double k, g;
    gk15(f, a, b, k, g, out.evals);
    double err = std::abs(k - g);
    if (err <= tol || depth >= 48 || !(b - a > 1e-300)) {
        out.value += k;
        out.error += err;
        return;
    }
    double c = 0.5 * (a + b);
    adapt(f, a, c, 0.5 * tol, depth + 1, out);
    adapt(f, c, b, 0.5 * tol, depth + 1, out);
}

} // namespace detail

// Adaptive Gauss-Kronrod on [a,b]; abs_tol is the target absolute error.
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b, double abs_tol) {
    QuadResult out;
    if (a == b) return out;
    detail::adapt(f, a, b, abs_tol, 0, out);
    return out;
}

} // namespace fol
