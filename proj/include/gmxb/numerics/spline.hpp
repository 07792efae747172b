#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gmxb {

/// Natural cubic spline through (knots, values).
///
/// Second derivatives vanish at both end knots; outside [x₀, x_M] the spline
/// continues linearly with the slope of the adjacent end interval.
class CubicSpline1D {
public:
    CubicSpline1D() = default;

    // Throws ParameterError for fewer than 3 knots, size mismatch or non-increasing knots.
    CubicSpline1D(std::vector<double> knots, std::vector<double> values);

    // Uniform knots x₀ + i·dx; cell lookup is O(1).
    static CubicSpline1D uniform(double x0, double dx, std::vector<double> values);

    double operator()(double x) const;

    // Evaluation inside cell [x_i, x_{i+1}] at relative position t ∈ [0, 1].
    double eval_cell(std::size_t i, double t) const;

    double slope_at_end() const;
    double slope_at_start() const;

    std::span<const double> knots() const { return knots_; }
    std::span<const double> values() const { return values_; }
    std::span<const double> second_derivatives() const { return d2_; }
    std::size_t size() const { return values_.size(); }

private:
    void solve_second_derivatives();
    std::size_t locate(double x) const;

    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> d2_;
    bool uniform_ = false;
    double x0_ = 0.0;
    double dx_ = 0.0;
};

// Natural-spline second derivatives for uniform spacing dx, written into d2.
// Both spans must have the same length (≥ 3). Allocation-free apart from `work`.
void natural_spline_uniform_d2(std::span<const double> values, double dx, std::span<double> d2,
                               std::span<double> work);

// Cubic-spline value in a cell from endpoint values and second derivatives.
inline double cubic_cell_value(double y0, double y1, double d2_0, double d2_1, double h, double t) {
    const double a = 1.0 - t;
    const double b = t;
    return a * y0 + b * y1 + ((a * a * a - a) * d2_0 + (b * b * b - b) * d2_1) * (h * h) / 6.0;
}

/// Bi-cubic spline on a uniform (x, y) grid built from local one-dimensional
/// cubic splines.
///
/// Second derivatives are taken from three-point central differences, so
/// every 1-D interpolation touches four neighbouring nodes. A single
/// evaluation performs four x-direction interpolations on rows j−1 … j+2 and
/// one y-direction interpolation through the four results. Values are stored
/// row-major: values[j * nx + i] is the node (x_i, y_j).
class BicubicSpline2D {
public:
    BicubicSpline2D() = default;

    // Throws ParameterError for fewer than 4 nodes per axis, non-positive spacing or size mismatch.
    BicubicSpline2D(double x0, double dx, std::size_t nx, double y0, double dy, std::size_t ny,
                    std::vector<double> values);

    double operator()(double x, double y) const;

    // 1-D local cubic along x on row j (linear beyond the row ends).
    double eval_row(std::size_t j, double x) const;

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double x0() const { return x0_; }
    double dx() const { return dx_; }
    double y0() const { return y0_; }
    double dy() const { return dy_; }
    double node(std::size_t i, std::size_t j) const { return values_[j * nx_ + i]; }

    // Number of 1-D interpolations used by the last operator() call on this thread.
    static int last_interpolation_count();

private:
    double row_value(std::size_t j, std::size_t i, double t) const;

    double x0_ = 0.0, dx_ = 1.0;
    double y0_ = 0.0, dy_ = 1.0;
    std::size_t nx_ = 0, ny_ = 0;
    std::vector<double> values_;
    std::vector<double> d2x_;
};

// End condition of a uniform spline segment.
enum class SplineEnd {
    natural,      // d2 = 0
    extrapolated  // d2 continues linearly from the two interior neighbours
};

// Uniform-spacing spline second derivatives with a chosen condition at each
// end. Segments shorter than three points get d2 = 0 and are piecewise linear.
void spline_uniform_d2(std::span<const double> values, double dx, SplineEnd lo, SplineEnd hi,
                       std::span<double> d2, std::span<double> work);

// Three-point central second differences of uniformly spaced samples; the end
// values are linearly extrapolated from the two nearest interior ones.
void central_second_differences(std::span<const double> values, double h, std::span<double> d2);

}  // namespace gmxb
