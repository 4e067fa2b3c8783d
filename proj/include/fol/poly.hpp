#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fol/error.hpp"

namespace fol {

using cplx = std::complex<double>;

// Point of C^n; entries must be finite.
using ComplexPoint = std::vector<cplx>;

bool finite(const ComplexPoint& x);

// Complex multivariate polynomial over an ordered variable list.
// Terms map exponent vectors to coefficients; zero coefficients are never stored.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    static Poly constant(std::vector<std::string> vars, cplx c);
    static Poly variable(std::vector<std::string> vars, const std::string& name);

    const std::vector<std::string>& vars() const { return vars_; }
    const std::map<std::vector<int>, cplx>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    int var_index(const std::string& name) const; // -1 if absent

    // max total exponent; -1 for the zero polynomial
    int degree() const;
    int degree_in(int var) const;
    bool is_homogeneous() const;

    void add_term(const std::vector<int>& exp, cplx c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(cplx c) const;
    Poly operator-() const;

    cplx eval(const ComplexPoint& x) const;

    Poly derivative(const std::string& var) const;
    Poly derivative(int var) const;

    // Substitute x_var := value, eliminating the variable from the list.
    Poly substitute(int var, cplx value) const;

    // Substitute every variable by a polynomial over a common new variable
    // list, dropping terms of total degree > truncate (truncate < 0: keep all).
    Poly compose(const std::vector<Poly>& images, int truncate = -1) const;

    // Drop terms with total degree > k.
    Poly truncated(int k) const;

    // Coefficients in `var` (index 0 = constant term), as polynomials in the
    // remaining variables.
    std::vector<Poly> coeffs_in(int var) const;

    double coeff_norm() const; // max |coefficient|

    std::string str() const;

    std::string to_json() const;
    static Poly from_json(const std::string& text);

private:
    std::vector<std::string> vars_;
    std::map<std::vector<int>, cplx> terms_;
};

struct ResultantResult {
    Poly value;
    bool leading_degenerate = false; // a leading coefficient was numerically zero
};

// Sylvester resultant of p and q with respect to `var`; the result lives in
// the remaining variable(s). Errors with code "degenerate" on zero input or
// when either polynomial has no positive degree in `var`.
ResultantResult resultant_eliminate(const Poly& p, const Poly& q, const std::string& var);

// All roots of a univariate polynomial (complex coefficients) by eigenvalues
// of the companion matrix.
std::vector<cplx> univariate_roots(const Poly& p, int var);
std::vector<cplx> univariate_roots(const std::vector<cplx>& coeffs_low_to_high);

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 50;
    double cond_cap = 1e12;
};

// Newton refinement of a root of a 2x2 system. Errors: "arity",
// "jacobian-singular", "no-convergence".
ComplexPoint newton_polish(const std::pair<Poly, Poly>& system, const ComplexPoint& guess,
                           double tol, const NewtonOptions& opt = {});

} // namespace fol
