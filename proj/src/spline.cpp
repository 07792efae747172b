#include "gmxb/numerics/spline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gmxb/errors.hpp"

namespace gmxb {

namespace {

thread_local int t_interpolations = 0;

double end_slope(double y_prev, double y_end, double d2_prev, double d2_end, double h) {
    return (y_end - y_prev) / h + h * (d2_prev + 2.0 * d2_end) / 6.0;
}

double start_slope(double y0, double y1, double d2_0, double d2_1, double h) {
    return (y1 - y0) / h - h * (2.0 * d2_0 + d2_1) / 6.0;
}

}  // namespace

CubicSpline1D::CubicSpline1D(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    if (knots_.size() != values_.size()) {
        throw ParameterError("spline_build: knots and values differ in length");
    }
    if (knots_.size() < 3) throw ParameterError("spline_build: need at least 3 knots");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (!(knots_[i] > knots_[i - 1])) {
            throw ParameterError("spline_build: knots must be strictly increasing (index " +
                                 std::to_string(i) + ")");
        }
    }
    solve_second_derivatives();
}

CubicSpline1D CubicSpline1D::uniform(double x0, double dx, std::vector<double> values) {
    if (!(dx > 0.0)) throw ParameterError("spline_build: uniform spacing must be positive");
    if (values.size() < 3) throw ParameterError("spline_build: need at least 3 knots");
    CubicSpline1D s;
    s.uniform_ = true;
    s.x0_ = x0;
    s.dx_ = dx;
    s.knots_.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) s.knots_[i] = x0 + dx * static_cast<double>(i);
    s.values_ = std::move(values);
    s.d2_.assign(s.values_.size(), 0.0);
    std::vector<double> work(s.values_.size());
    natural_spline_uniform_d2(s.values_, dx, s.d2_, work);
    return s;
}

void CubicSpline1D::solve_second_derivatives() {
    const std::size_t n = knots_.size();
    d2_.assign(n, 0.0);
    std::vector<double> u(n, 0.0);
    // Natural boundary: d2[0] = d2[n-1] = 0.
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double sig = (knots_[i] - knots_[i - 1]) / (knots_[i + 1] - knots_[i - 1]);
        const double p = sig * d2_[i - 1] + 2.0;
        d2_[i] = (sig - 1.0) / p;
        const double slope_diff = (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]) -
                                  (values_[i] - values_[i - 1]) / (knots_[i] - knots_[i - 1]);
        u[i] = (6.0 * slope_diff / (knots_[i + 1] - knots_[i - 1]) - sig * u[i - 1]) / p;
    }
    d2_[n - 1] = 0.0;
    for (std::size_t k = n - 1; k-- > 1;) d2_[k] = d2_[k] * d2_[k + 1] + u[k];
    d2_[0] = 0.0;
}

void natural_spline_uniform_d2(std::span<const double> values, double dx, std::span<double> d2,
                               std::span<double> work) {
    const std::size_t n = values.size();
    // Interior equations: d2[i-1] + 4 d2[i] + d2[i+1] = 6 (y[i+1] - 2y[i] + y[i-1]) / dx².
    const double scale = 6.0 / (dx * dx);
    d2[0] = 0.0;
    d2[n - 1] = 0.0;
    if (n < 3) return;
    // Forward sweep; work holds the modified super-diagonal.
    double prev_c = 0.0;
    double prev_d = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double rhs = scale * (values[i + 1] - 2.0 * values[i] + values[i - 1]);
        const double denom = 4.0 - prev_c;
        const double c = 1.0 / denom;
        const double d = (rhs - prev_d) / denom;
        work[i] = c;
        d2[i] = d;
        prev_c = c;
        prev_d = d;
    }
    for (std::size_t i = n - 2; i >= 2; --i) d2[i - 1] -= work[i - 1] * d2[i];
}

void spline_uniform_d2(std::span<const double> values, double dx, SplineEnd lo, SplineEnd hi,
                       std::span<double> d2, std::span<double> work) {
    const std::size_t n = values.size();
    const bool extrap_lo = lo == SplineEnd::extrapolated;
    const bool extrap_hi = hi == SplineEnd::extrapolated;
    std::fill(d2.begin(), d2.begin() + static_cast<long>(n), 0.0);
    if (n < 3) return;
    const double scale = 6.0 / (dx * dx);
    if (n == 3) {
        // One interior unknown; an extrapolated end copies it.
        const double diag = (extrap_lo ? 5.0 : 4.0) + (extrap_hi ? 1.0 : 0.0);
        d2[1] = scale * (values[2] - 2.0 * values[1] + values[0]) / diag;
        if (extrap_lo) d2[0] = d2[1];
        if (extrap_hi) d2[2] = d2[1];
        return;
    }
    // A linear-extrapolation end d2₀ = 2d2₁ − d2₂ turns the first row into
    // 6·d2₁ = rhs₁ and decouples it from d2₂.
    double prev_c = 0.0;
    double prev_d = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double diag = 4.0;
        double sub = 1.0;
        double sup = 1.0;
        if (i == 1 && extrap_lo) {
            diag = 6.0;
            sup = 0.0;
        }
        if (i == n - 2 && extrap_hi) {
            diag = 6.0;
            sub = 0.0;
        }
        const double rhs = scale * (values[i + 1] - 2.0 * values[i] + values[i - 1]);
        const double denom = diag - sub * prev_c;
        work[i] = sup / denom;
        d2[i] = (rhs - sub * prev_d) / denom;
        prev_c = work[i];
        prev_d = d2[i];
    }
    for (std::size_t i = n - 2; i >= 2; --i) d2[i - 1] -= work[i - 1] * d2[i];
    if (extrap_lo) d2[0] = 2.0 * d2[1] - d2[2];
    if (extrap_hi) d2[n - 1] = 2.0 * d2[n - 2] - d2[n - 3];
}

std::size_t CubicSpline1D::locate(double x) const {
    const std::size_t last_cell = knots_.size() - 2;
    if (uniform_) {
        const double pos = (x - x0_) / dx_;
        if (pos <= 0.0) return 0;
        const auto i = static_cast<std::size_t>(pos);
        return std::min(i, last_cell);
    }
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    if (it == knots_.begin()) return 0;
    const auto i = static_cast<std::size_t>(it - knots_.begin()) - 1;
    return std::min(i, last_cell);
}

double CubicSpline1D::eval_cell(std::size_t i, double t) const {
    const double h = knots_[i + 1] - knots_[i];
    return cubic_cell_value(values_[i], values_[i + 1], d2_[i], d2_[i + 1], h, t);
}

double CubicSpline1D::slope_at_end() const {
    const std::size_t n = knots_.size();
    return end_slope(values_[n - 2], values_[n - 1], d2_[n - 2], d2_[n - 1],
                     knots_[n - 1] - knots_[n - 2]);
}

double CubicSpline1D::slope_at_start() const {
    return start_slope(values_[0], values_[1], d2_[0], d2_[1], knots_[1] - knots_[0]);
}

double CubicSpline1D::operator()(double x) const {
    const std::size_t n = knots_.size();
    if (x > knots_[n - 1]) return values_[n - 1] + slope_at_end() * (x - knots_[n - 1]);
    if (x < knots_[0]) return values_[0] + slope_at_start() * (x - knots_[0]);
    const std::size_t i = locate(x);
    const double h = knots_[i + 1] - knots_[i];
    return eval_cell(i, (x - knots_[i]) / h);
}

void central_second_differences(std::span<const double> values, double h, std::span<double> d2) {
    const std::size_t n = values.size();
    const double inv_h2 = 1.0 / (h * h);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d2[i] = (values[i - 1] - 2.0 * values[i] + values[i + 1]) * inv_h2;
    }
    if (n >= 4) {
        d2[0] = 2.0 * d2[1] - d2[2];
        d2[n - 1] = 2.0 * d2[n - 2] - d2[n - 3];
    } else if (n == 3) {
        d2[0] = d2[1];
        d2[2] = d2[1];
    } else {
        for (auto& v : d2) v = 0.0;
    }
}

BicubicSpline2D::BicubicSpline2D(double x0, double dx, std::size_t nx, double y0, double dy,
                                 std::size_t ny, std::vector<double> values)
    : x0_(x0), dx_(dx), y0_(y0), dy_(dy), nx_(nx), ny_(ny), values_(std::move(values)) {
    if (nx_ < 4 || ny_ < 4) throw ParameterError("bicubic: need at least 4 nodes per axis");
    if (!(dx_ > 0.0) || !(dy_ > 0.0)) throw ParameterError("bicubic: grid spacing must be positive");
    if (values_.size() != nx_ * ny_) throw ParameterError("bicubic: value matrix has wrong size");
    d2x_.resize(values_.size());
    for (std::size_t j = 0; j < ny_; ++j) {
        central_second_differences(std::span<const double>(values_).subspan(j * nx_, nx_), dx_,
                                   std::span<double>(d2x_).subspan(j * nx_, nx_));
    }
}

double BicubicSpline2D::row_value(std::size_t j, std::size_t i, double t) const {
    const std::size_t k = j * nx_ + i;
    return cubic_cell_value(values_[k], values_[k + 1], d2x_[k], d2x_[k + 1], dx_, t);
}

double BicubicSpline2D::eval_row(std::size_t j, double x) const {
    const double pos = (x - x0_) / dx_;
    const std::size_t base = j * nx_;
    if (pos < 0.0) {
        const double slope = start_slope(values_[base], values_[base + 1], d2x_[base],
                                         d2x_[base + 1], dx_);
        return values_[base] + slope * (x - x0_);
    }
    const double last = static_cast<double>(nx_ - 1);
    if (pos > last) {
        const std::size_t e = base + nx_ - 1;
        const double slope = end_slope(values_[e - 1], values_[e], d2x_[e - 1], d2x_[e], dx_);
        return values_[e] + slope * (pos - last) * dx_;
    }
    std::size_t i = static_cast<std::size_t>(pos);
    if (i > nx_ - 2) i = nx_ - 2;
    return row_value(j, i, pos - static_cast<double>(i));
}

double BicubicSpline2D::operator()(double x, double y) const {
    int count = 0;
    // x-direction: four rows around the y cell.
    const double ypos = (y - y0_) / dy_;
    const double ylast = static_cast<double>(ny_ - 1);
    std::size_t jc;
    if (ypos <= 0.0) {
        jc = 0;
    } else if (ypos >= ylast) {
        jc = ny_ - 2;
    } else {
        jc = std::min(static_cast<std::size_t>(ypos), ny_ - 2);
    }
    const std::size_t first_row = std::min(jc > 0 ? jc - 1 : 0, ny_ - 4);
    double r[4];
    for (int k = 0; k < 4; ++k) {
        r[k] = eval_row(first_row + static_cast<std::size_t>(k), x);
        ++count;
    }
    // y-direction: second differences at rows first_row+1 and first_row+2,
    // linearly extrapolated to the outer rows.
    const double inv_h2 = 1.0 / (dy_ * dy_);
    const double c1 = (r[0] - 2.0 * r[1] + r[2]) * inv_h2;
    const double c2 = (r[1] - 2.0 * r[2] + r[3]) * inv_h2;
    const double d2y[4] = {2.0 * c1 - c2, c1, c2, 2.0 * c2 - c1};
    const std::size_t a = jc - first_row;  // 0, 1 or 2
    double result;
    if (ypos < 0.0) {
        result = r[a] + start_slope(r[a], r[a + 1], d2y[a], d2y[a + 1], dy_) * ypos * dy_;
    } else if (ypos > ylast) {
        result = r[a + 1] +
                 end_slope(r[a], r[a + 1], d2y[a], d2y[a + 1], dy_) * (ypos - ylast) * dy_;
    } else {
        result = cubic_cell_value(r[a], r[a + 1], d2y[a], d2y[a + 1], dy_,
                                  ypos - static_cast<double>(jc));
    }
    ++count;
    t_interpolations = count;
    return result;
}

int BicubicSpline2D::last_interpolation_count() { return t_interpolations; }

}  // namespace gmxb
