#pragma once

#include <functional>
#include <span>
#include <vector>

namespace gmxb {

struct RootResult {
    double root = 0.0;
    double value = 0.0;  // f(root)
    int evaluations = 0;
    int iterations = 0;
};

/// Bracketing root search: bisection safeguarded secant steps.
///
/// Requires f(lo)·f(hi) ≤ 0, otherwise throws BracketError. Terminates when
/// the bracket width falls below `tol` (absolute, in x) or f hits zero.
RootResult find_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                     int max_iterations = 200);

// Same search with f(lo) and f(hi) already known.
RootResult find_root(const std::function<double(double)>& f, double lo, double f_lo, double hi,
                     double f_hi, double tol, int max_iterations = 200);

/// Solves the tridiagonal system with sub-diagonal `sub` (sub[0] unused),
/// diagonal `diag` and super-diagonal `super` (super[n-1] unused).
/// Throws SingularityError on a vanishing pivot.
std::vector<double> tridiag_solve(std::span<const double> sub, std::span<const double> diag,
                                  std::span<const double> super, std::span<const double> rhs);

// Allocation-free variant; `scratch` needs n entries. rhs and out may alias.
void tridiag_solve_into(std::span<const double> sub, std::span<const double> diag,
                        std::span<const double> super, std::span<const double> rhs,
                        std::span<double> out, std::span<double> scratch);

}  // namespace gmxb
