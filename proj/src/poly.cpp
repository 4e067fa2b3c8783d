#include "fol/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <nlohmann/json.hpp>

namespace fol {

namespace {
constexpr double kDropTol = 0.0; // exact zeros only; callers clean noise explicitly
}

bool finite(const ComplexPoint& x) {
    for (const auto& c : x)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

Poly Poly::constant(std::vector<std::string> vars, cplx c) {
    Poly p(std::move(vars));
    p.add_term(std::vector<int>(p.vars_.size(), 0), c);
    return p;
}

Poly Poly::variable(std::vector<std::string> vars, const std::string& name) {
    Poly p(std::move(vars));
    int i = p.var_index(name);
    if (i < 0) throw Error("unknown-variable", "no variable named " + name);
    std::vector<int> e(p.vars_.size(), 0);
    e[static_cast<size_t>(i)] = 1;
    p.add_term(e, 1.0);
    return p;
}

int Poly::var_index(const std::string& name) const {
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return static_cast<int>(i);
    return -1;
}

int Poly::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        (void)c;
        int t = 0;
        for (int k : e) t += k;
        d = std::max(d, t);
    }
    return d;
}

int Poly::degree_in(int var) const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        (void)c;
        d = std::max(d, e[static_cast<size_t>(var)]);
    }
    return d;
}

bool Poly::is_homogeneous() const {
    int d = -2;
    for (const auto& [e, c] : terms_) {
        (void)c;
        int t = 0;
        for (int k : e) t += k;
        if (d == -2) d = t;
        else if (t != d) return false;
    }
    return true;
}

void Poly::add_term(const std::vector<int>& exp, cplx c) {
    if (exp.size() != vars_.size())
        throw Error("arity", "exponent vector length does not match variable count");
    for (int k : exp)
        if (k < 0) throw Error("arity", "negative exponent");
    auto it = terms_.find(exp);
    if (it == terms_.end()) {
        if (c != cplx(0.0)) terms_.emplace(exp, c);
        return;
    }
    it->second += c;
    if (std::abs(it->second) <= kDropTol || it->second == cplx(0.0)) terms_.erase(it);
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r(vars_);
    std::vector<int> e(vars_.size());
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

Poly Poly::operator*(cplx c) const {
    Poly r(vars_);
    if (c == cplx(0.0)) return r;
    for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
    return r;
}

Poly Poly::operator-() const { return *this * cplx(-1.0); }

cplx Poly::eval(const ComplexPoint& x) const {
    if (x.size() != vars_.size())
        throw Error("arity", "point dimension does not match variable count");
    if (!finite(x)) throw Error("arity", "non-finite evaluation point");
    if (terms_.empty()) return 0.0;
    // Horner in the first variable, recursing over the tail.
    struct Rec {
        static cplx run(const std::map<std::vector<int>, cplx>& terms, size_t var,
                        size_t nvars, const ComplexPoint& x) {
            if (var == nvars) {
                cplx s = 0.0;
                for (const auto& [e, c] : terms) {
                    (void)e;
                    s += c;
                }
                return s;
            }
            // split by exponent of this variable
            std::map<int, std::map<std::vector<int>, cplx>> groups;
            for (const auto& [e, c] : terms) groups[e[var]].emplace(e, c);
            int dmax = groups.rbegin()->first;
            cplx r = 0.0;
            for (int d = dmax; d >= 0; --d) {
                r *= x[var];
                auto it = groups.find(d);
                if (it != groups.end()) r += run(it->second, var + 1, nvars, x);
            }
            return r;
        }
    };
    return Rec::run(terms_, 0, vars_.size(), x);
}

Poly Poly::derivative(const std::string& var) const {
    int i = var_index(var);
    if (i < 0) throw Error("unknown-variable", "no variable named " + var);
    return derivative(i);
}

Poly Poly::derivative(int var) const {
    Poly r(vars_);
    std::vector<int> e(vars_.size());
    for (const auto& [exp, c] : terms_) {
        int k = exp[static_cast<size_t>(var)];
        if (k == 0) continue;
        e = exp;
        e[static_cast<size_t>(var)] = k - 1;
        r.add_term(e, c * static_cast<double>(k));
    }
    return r;
}

Poly Poly::substitute(int var, cplx value) const {
    std::vector<std::string> nv;
    for (size_t i = 0; i < vars_.size(); ++i)
        if (static_cast<int>(i) != var) nv.push_back(vars_[i]);
    Poly r(nv);
    std::vector<int> e(nv.size());
    for (const auto& [exp, c] : terms_) {
        cplx f = c;
        for (int k = 0; k < exp[static_cast<size_t>(var)]; ++k) f *= value;
        size_t j = 0;
        for (size_t i = 0; i < exp.size(); ++i)
            if (static_cast<int>(i) != var) e[j++] = exp[i];
        r.add_term(e, f);
    }
    return r;
}

Poly Poly::compose(const std::vector<Poly>& images, int truncate) const {
    if (images.size() != vars_.size())
        throw Error("arity", "compose needs one image per variable");
    std::vector<std::string> nv = images.empty() ? vars_ : images[0].vars();
    Poly r(nv);
    for (const auto& [exp, c] : terms_) {
        Poly t = Poly::constant(nv, c);
        for (size_t i = 0; i < exp.size(); ++i)
            for (int k = 0; k < exp[i]; ++k) {
                t = t * images[i];
                if (truncate >= 0) t = t.truncated(truncate);
            }
        r = r + t;
    }
    if (truncate >= 0) r = r.truncated(truncate);
    return r;
}

Poly Poly::truncated(int k) const {
    Poly r(vars_);
    for (const auto& [e, c] : terms_) {
        int t = 0;
        for (int d : e) t += d;
        if (t <= k) r.add_term(e, c);
    }
    return r;
}

std::vector<Poly> Poly::coeffs_in(int var) const {
    int d = degree_in(var);
    std::vector<std::string> nv;
    for (size_t i = 0; i < vars_.size(); ++i)
        if (static_cast<int>(i) != var) nv.push_back(vars_[i]);
    std::vector<Poly> out(static_cast<size_t>(std::max(d + 1, 1)), Poly(nv));
    std::vector<int> e(nv.size());
    for (const auto& [exp, c] : terms_) {
        size_t j = 0;
        for (size_t i = 0; i < exp.size(); ++i)
            if (static_cast<int>(i) != var) e[j++] = exp[i];
        out[static_cast<size_t>(exp[static_cast<size_t>(var)])].add_term(e, c);
    }
    return out;
}

double Poly::coeff_norm() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) {
        (void)e;
        m = std::max(m, std::abs(c));
    }
    return m;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            os << "*" << vars_[i];
            if (e[i] > 1) os << "^" << e[i];
        }
    }
    return os.str();
}

std::string Poly::to_json() const {
    nlohmann::json j;
    j["vars"] = vars_;
    j["terms"] = nlohmann::json::array();
    for (const auto& [e, c] : terms_) {
        nlohmann::json t;
        t["exp"] = e;
        t["re"] = c.real();
        t["im"] = c.imag();
        j["terms"].push_back(t);
    }
    return j.dump();
}

Poly Poly::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Poly p(j.at("vars").get<std::vector<std::string>>());
    for (const auto& t : j.at("terms")) {
        p.add_term(t.at("exp").get<std::vector<int>>(),
                   cplx(t.at("re").get<double>(), t.at("im").get<double>()));
    }
    return p;
}

namespace {

// Univariate complex polynomial (coefficients low to high); the Sylvester
// entries are univariate in the surviving variable because the resultant
// inputs are bivariate.
struct UPoly {
    std::vector<cplx> c;

    int deg() const {
        for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
            if (c[static_cast<size_t>(i)] != cplx(0.0)) return i;
        return -1;
    }
    double norm() const {
        double m = 0.0;
        for (const auto& v : c) m = std::max(m, std::abs(v));
        return m;
    }
    void trim(double tol) {
        while (!c.empty() && std::abs(c.back()) <= tol) c.pop_back();
    }
};

UPoly umul(const UPoly& a, const UPoly& b) {
    if (a.c.empty() || b.c.empty()) return {};
    UPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

UPoly usub(const UPoly& a, const UPoly& b) {
    UPoly r = a;
    if (b.c.size() > r.c.size()) r.c.resize(b.c.size(), 0.0);
    for (size_t j = 0; j < b.c.size(); ++j) r.c[j] -= b.c[j];
    return r;
}

// Division with remainder known to vanish algebraically (Bareiss pivots);
// the tiny numerical remainder is dropped.
UPoly udiv_exact(const UPoly& num, const UPoly& den) {
    UPoly n = num, d = den;
    double dscale = d.norm();
    if (dscale == 0.0) throw Error("degenerate", "division by zero polynomial");
    d.trim(1e-14 * dscale);
    n.trim(0.0);
    int dd = static_cast<int>(d.c.size()) - 1;
    int dn = static_cast<int>(n.c.size()) - 1;
    if (dn < dd) return {};
    UPoly q;
    q.c.assign(static_cast<size_t>(dn - dd + 1), 0.0);
    cplx lead = d.c[static_cast<size_t>(dd)];
    for (int k = dn - dd; k >= 0; --k) {
        cplx f = n.c[static_cast<size_t>(k + dd)] / lead;
        q.c[static_cast<size_t>(k)] = f;
        for (int j = 0; j <= dd; ++j) n.c[static_cast<size_t>(k + j)] -= f * d.c[static_cast<size_t>(j)];
    }
    return q;
}

UPoly upoly_from(const Poly& p) {
    // p lives in at most one variable
    UPoly r;
    if (p.vars().empty()) {
        if (!p.is_zero()) r.c.push_back(p.terms().begin()->second);
        return r;
    }
    for (const auto& [e, v] : p.terms()) {
        size_t k = static_cast<size_t>(e[0]);
        if (r.c.size() <= k) r.c.resize(k + 1, 0.0);
        r.c[k] += v;
    }
    return r;
}

Poly upoly_to(const UPoly& u, const std::vector<std::string>& vars) {
    Poly p(vars);
    for (size_t k = 0; k < u.c.size(); ++k) {
        if (u.c[k] == cplx(0.0)) continue;
        std::vector<int> e(vars.size(), 0);
        if (!vars.empty()) e[0] = static_cast<int>(k);
        p.add_term(e, u.c[k]);
    }
    return p;
}

} // namespace

ResultantResult resultant_eliminate(const Poly& p, const Poly& q, const std::string& var) {
    if (p.is_zero() || q.is_zero())
        throw Error("degenerate", "resultant of the zero polynomial");
    int vi = p.var_index(var);
    int vj = q.var_index(var);
    if (vi < 0 || vj < 0) throw Error("unknown-variable", "no variable named " + var);
    int dp = p.degree_in(vi);
    int dq = q.degree_in(vj);
    if (dp < 1 || dq < 1)
        throw Error("degenerate", "both inputs need positive degree in " + var);

    auto pc = p.coeffs_in(vi); // polynomials in the surviving variable(s)
    auto qc = q.coeffs_in(vj);
    std::vector<std::string> sv = pc[0].vars();
    if (sv.size() > 1)
        throw Error("arity", "resultant_eliminate expects at most bivariate inputs");

    ResultantResult rr;
    double scale = std::max(p.coeff_norm(), q.coeff_norm());
    if (pc.back().coeff_norm() < 1e-12 * scale || qc.back().coeff_norm() < 1e-12 * scale)
        rr.leading_degenerate = true;

    const int n = dp + dq;
    std::vector<std::vector<UPoly>> m(static_cast<size_t>(n),
                                      std::vector<UPoly>(static_cast<size_t>(n)));
    // Sylvester layout: dq staggered rows of p's coefficients then dp of q's,
    // highest-degree coefficient first.
    for (int r = 0; r < dq; ++r)
        for (int k = 0; k <= dp; ++k)
            m[static_cast<size_t>(r)][static_cast<size_t>(r + k)] =
                upoly_from(pc[static_cast<size_t>(dp - k)]);
    for (int r = 0; r < dp; ++r)
        for (int k = 0; k <= dq; ++k)
            m[static_cast<size_t>(dq + r)][static_cast<size_t>(r + k)] =
                upoly_from(qc[static_cast<size_t>(dq - k)]);

    // Bareiss fraction-free elimination; divisions by the previous pivot are exact.
    UPoly prev;
    prev.c = {1.0};
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        int piv = -1;
        double best = 0.0;
        for (int r = k; r < n; ++r) {
            double nrm = m[static_cast<size_t>(r)][static_cast<size_t>(k)].norm();
            if (nrm > best) {
                best = nrm;
                piv = r;
            }
        }
        if (piv < 0) {
            rr.value = Poly(sv); // column of zeros: resultant vanishes identically
            return rr;
        }
        if (piv != k) {
            std::swap(m[static_cast<size_t>(piv)], m[static_cast<size_t>(k)]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                UPoly num = usub(umul(m[static_cast<size_t>(i)][static_cast<size_t>(j)],
                                      m[static_cast<size_t>(k)][static_cast<size_t>(k)]),
                                 umul(m[static_cast<size_t>(i)][static_cast<size_t>(k)],
                                      m[static_cast<size_t>(k)][static_cast<size_t>(j)]));
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    (k == 0) ? num : udiv_exact(num, prev);
            }
            m[static_cast<size_t>(i)][static_cast<size_t>(k)] = UPoly{};
        }
        prev = m[static_cast<size_t>(k)][static_cast<size_t>(k)];
    }
    UPoly det = m[static_cast<size_t>(n - 1)][static_cast<size_t>(n - 1)];
    if (sign < 0)
        for (auto& v : det.c) v = -v;
    rr.value = upoly_to(det, sv);
    return rr;
}

std::vector<cplx> univariate_roots(const std::vector<cplx>& coeffs) {
    int d = static_cast<int>(coeffs.size()) - 1;
    double top = 0.0;
    for (const auto& c : coeffs) top = std::max(top, std::abs(c));
    if (top == 0.0) throw Error("degenerate", "zero polynomial has no isolated roots");
    while (d > 0 && std::abs(coeffs[static_cast<size_t>(d)]) < 1e-14 * top) --d;
    if (d <= 0) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    cplx lead = coeffs[static_cast<size_t>(d)];
    for (int i = 0; i < d; ++i) {
        comp(i, d - 1) = -coeffs[static_cast<size_t>(i)] / lead;
        if (i > 0) comp(i, i - 1) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<cplx> roots;
    roots.reserve(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) roots.push_back(es.eigenvalues()(i));
    return roots;
}

std::vector<cplx> univariate_roots(const Poly& p, int var) {
    auto cs = p.coeffs_in(var);
    std::vector<cplx> coeffs;
    coeffs.reserve(cs.size());
    for (const auto& c : cs) {
        if (c.degree() > 0)
            throw Error("arity", "polynomial is not univariate in the requested variable");
        coeffs.push_back(c.is_zero() ? cplx(0.0) : c.terms().begin()->second);
    }
    return univariate_roots(coeffs);
}

ComplexPoint newton_polish(const std::pair<Poly, Poly>& system, const ComplexPoint& guess,
                           double tol, const NewtonOptions& opt) {
    const Poly& f = system.first;
    const Poly& g = system.second;
    if (guess.size() != 2 || f.vars().size() != 2 || g.vars().size() != 2)
        throw Error("arity", "newton_polish expects a 2x2 system");
    Poly fz = f.derivative(0), fw = f.derivative(1);
    Poly gz = g.derivative(0), gw = g.derivative(1);

    ComplexPoint x = guess;
    // Iterate to stall rather than stopping at the residual tolerance: a
    // multiple root converges linearly into a degenerate Jacobian, which the
    // conditioning check at the final point then reports.
    for (int it = 0; it < opt.max_iter; ++it) {
        cplx F = f.eval(x), G = g.eval(x);
        cplx a = fz.eval(x), b = fw.eval(x);
        cplx c = gz.eval(x), d = gw.eval(x);
        cplx det = a * d - b * c;
        double nrm = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
        if (std::abs(det) < nrm * nrm / opt.cond_cap || nrm == 0.0)
            throw Error("jacobian-singular", "Jacobian numerically singular at iterate");
        cplx dz = (F * d - b * G) / det;
        cplx dw = (a * G - F * c) / det;
        x[0] -= dz;
        x[1] -= dw;
        if (!finite(x)) throw Error("no-convergence", "iterate left the finite plane");
        double step = std::max(std::abs(dz), std::abs(dw));
        double scale = 1.0 + std::max(std::abs(x[0]), std::abs(x[1]));
        if (step < 1e-14 * scale) break;
    }
    {
        cplx a = fz.eval(x), b = fw.eval(x);
        cplx c = gz.eval(x), d = gw.eval(x);
        cplx det = a * d - b * c;
        double nrm = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
        if (std::abs(det) < nrm * nrm * 1e4 / opt.cond_cap || nrm == 0.0)
            throw Error("jacobian-singular", "root is numerically multiple");
    }
    cplx F = f.eval(x), G = g.eval(x);
    if (std::max(std::abs(F), std::abs(G)) < tol) return x;
    throw Error("no-convergence", "residual above tolerance after max iterations");
}

} // namespace fol
