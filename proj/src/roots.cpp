#include "gmxb/numerics/roots.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "gmxb/errors.hpp"

namespace gmxb {

RootResult find_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                     int max_iterations) {
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    RootResult r = find_root(f, lo, f_lo, hi, f_hi, tol, max_iterations);
    r.evaluations += 2;
    return r;
}

RootResult find_root(const std::function<double(double)>& f, double lo, double f_lo, double hi,
                     double f_hi, double tol, int max_iterations) {
    if (!(tol > 0.0)) throw ParameterError("find_root: tolerance must be positive");
    if (std::isnan(f_lo) || std::isnan(f_hi)) throw NumericalError("find_root: NaN at bracket end");
    RootResult out;
    if (f_lo == 0.0) {
        out.root = lo;
        return out;
    }
    if (f_hi == 0.0) {
        out.root = hi;
        return out;
    }
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        std::ostringstream msg;
        msg << "find_root: no sign change on [" << lo << ", " << hi << "] (f = " << f_lo << ", "
            << f_hi << ")";
        throw BracketError(msg.str());
    }

    // b: best estimate; c: contrapoint with f(b)·f(c) < 0; a: previous iterate.
    double a = lo, fa = f_lo;
    double b = hi, fb = f_hi;
    double c = b, fc = fb;
    double d = b - a, e = d;
    for (int it = 0; it < max_iterations; ++it) {
        out.iterations = it + 1;
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) break;

        bool bisect = true;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            const double secant = (b - a) * s / (1.0 - s);
            // Secant step must head towards c, stay inside the bracket and
            // shrink faster than the step before last.
            if ((secant > 0.0) == (xm > 0.0) && std::abs(secant) < 1.5 * std::abs(xm) - 0.5 * tol1 &&
                std::abs(secant) < 0.5 * std::abs(e)) {
                e = d;
                d = secant;
                bisect = false;
            }
        }
        if (bisect) {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        ++out.evaluations;
        if (std::isnan(fb)) throw NumericalError("find_root: NaN during iteration");
    }
    out.root = b;
    out.value = fb;
    return out;
}

void tridiag_solve_into(std::span<const double> sub, std::span<const double> diag,
                        std::span<const double> super, std::span<const double> rhs,
                        std::span<double> out, std::span<double> scratch) {
    const std::size_t n = diag.size();
    if (sub.size() != n || super.size() != n || rhs.size() != n || out.size() < n ||
        scratch.size() < n) {
        throw ParameterError("tridiag_solve: inconsistent sizes");
    }
    if (n == 0) return;
    double pivot = diag[0];
    if (pivot == 0.0) throw SingularityError("tridiag_solve: zero pivot at row 0");
    scratch[0] = super[0] / pivot;
    out[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - sub[i] * scratch[i - 1];
        if (pivot == 0.0) {
            throw SingularityError("tridiag_solve: zero pivot at row " + std::to_string(i));
        }
        scratch[i] = (i + 1 < n) ? super[i] / pivot : 0.0;
        out[i] = (rhs[i] - sub[i] * out[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) out[i] -= scratch[i] * out[i + 1];
}

std::vector<double> tridiag_solve(std::span<const double> sub, std::span<const double> diag,
                                  std::span<const double> super, std::span<const double> rhs) {
    std::vector<double> out(diag.size());
    std::vector<double> scratch(diag.size());
    tridiag_solve_into(sub, diag, super, rhs, out, scratch);
    return out;
}

}  // namespace gmxb
