#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "gmxb/numerics/spline.hpp"

namespace gmxb {

class MarketModel;

struct LatticeSpec {
    int m = 400;                   // W-grid has m + 1 nodes
    int j = 200;                   // A-grid: one zero-base slice plus j − 1 log-uniform nodes
    double w_floor_rel = 1e-6;     // W₀ as a fraction of the premium
    double a_floor_rel = 1e-3;     // positive A nodes reach at least this far below the premium
    double sigma_multiple = 5.0;   // W_M covers |mean| + k·stdev of ln W(T)/W(0)
};

/// Node set of the (W, A) state space.
///
/// Both axes are uniform in the logarithm and the premium is a node of each,
/// so an issue-date contract sits exactly on the lattice. Slice 0 of the
/// A-axis is the zero benefit base; slices 1 … J−1 are log-uniform and, when
/// built by `build`, coincide with every k-th W node.
class Lattice {
public:
    Lattice() = default;
    Lattice(double x0, double dx, std::size_t m, double y1, double dy, std::size_t j);

    // Grid covering W(T) for the given market, aligned on ln(premium).
    static Lattice build(const LatticeSpec& spec, const MarketModel& market, double premium);

    std::size_t w_size() const { return nw_; }
    std::size_t a_size() const { return na_; }
    double x0() const { return x0_; }
    double dx() const { return dx_; }
    double y1() const { return y1_; }
    double dy() const { return dy_; }

    double x(std::size_t m) const { return x0_ + static_cast<double>(m) * dx_; }
    double wealth(std::size_t m) const { return w_[m]; }
    double base(std::size_t j) const { return a_[j]; }
    const std::vector<double>& wealth_nodes() const { return w_; }
    const std::vector<double>& base_nodes() const { return a_; }

    // Index of the A-node equal to `a` (relative match 1e-12), or −1.
    long find_base(double a) const;
    long find_wealth(double w) const;
    // W-node on the diagonal W = A_j, where ratchets and max(W, A) payoffs
    // leave a kink in slice j; −1 for the zero slice or an off-grid base.
    long diagonal_node(std::size_t j) const { return j == 0 ? -1 : find_wealth(a_[j]); }

private:
    double x0_ = 0.0, dx_ = 1.0, y1_ = 0.0, dy_ = 1.0;
    std::size_t nw_ = 0, na_ = 0;
    std::vector<double> w_;
    std::vector<double> a_;
};

/// Values on every lattice node for one time slice; row j holds A_j.
struct Surface {
    std::size_t nw = 0;
    std::size_t na = 0;
    std::vector<double> v;

    Surface() = default;
    Surface(std::size_t w_nodes, std::size_t a_nodes, double fill = 0.0)
        : nw(w_nodes), na(a_nodes), v(w_nodes * a_nodes, fill) {}
    explicit Surface(const Lattice& lattice, double fill = 0.0)
        : Surface(lattice.w_size(), lattice.a_size(), fill) {}

    double& at(std::size_t j, std::size_t m) { return v[j * nw + m]; }
    double at(std::size_t j, std::size_t m) const { return v[j * nw + m]; }
    double* row(std::size_t j) { return v.data() + j * nw; }
    const double* row(std::size_t j) const { return v.data() + j * nw; }
};

/// Cubic spline along one slice in ln W, stored per cell.
///
/// With a kink node the spline is split there and each side's curvature is
/// extrapolated up to it, so the kink is reproduced instead of smeared over
/// neighbouring cells. Otherwise it is the natural spline.
struct SliceCells {
    std::vector<double> dl;  // second derivative at the left end of each cell
    std::vector<double> dr;  // second derivative at the right end of each cell

    void build(const double* y, std::size_t nw, double h, long kink);
    // Slope at the last node, used for linear extrapolation above the grid.
    double end_slope(const double* y, std::size_t nw, double h) const;

private:
    std::vector<double> d2_;
    std::vector<double> work_;
};

// Evaluates one slice off-grid: constant below W₀, linear above W_M.
class SliceSpline {
public:
    SliceSpline(const Lattice& lattice, const double* row, long kink);
    double operator()(double wealth) const;

private:
    double x0_;
    double h_;
    std::vector<double> y_;
    SliceCells cells_;
    double slope_ = 0.0;
};

// Throws NumericalError naming the first non-finite node.
void check_finite(const Surface& s, const Lattice& lattice, const char* stage, std::size_t n);

/// Off-grid evaluation of a surface.
///
/// Positive bases use the bi-cubic spline over (ln W, ln A); the zero-base
/// slice uses the same local cubic along ln W; bases between zero and the
/// first positive node blend the two linearly. Wealth below W₀ takes the W₀
/// value and wealth above W_M continues linearly.
class SurfaceInterpolator {
public:
    SurfaceInterpolator(const Lattice& lattice, const Surface& surface);

    double operator()(double wealth, double base) const;
    double row_value(std::size_t j, double wealth) const;

private:
    double clamp_x(double wealth) const;
    double zero_row(double x) const;

    const Lattice* lattice_;
    const Surface* surface_;
    BicubicSpline2D upper_;
    std::vector<double> d2_zero_;
};

}  // namespace gmxb
