#include "gmxb/solver/lattice.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "gmxb/errors.hpp"
#include "gmxb/model/market.hpp"

namespace gmxb {

namespace {

// Splits `cells` uniform steps between a span `below` under the anchor and
// `above` over it, so the anchor is a node and both spans are covered.
void aligned_axis(double below, double above, std::size_t cells, std::size_t& anchor,
                  double& step) {
    const double total = below + above;
    auto k = static_cast<std::size_t>(std::lround(static_cast<double>(cells) * below / total));
    k = std::clamp<std::size_t>(k, 1, cells - 1);
    step = std::max(below / static_cast<double>(k), above / static_cast<double>(cells - k));
    anchor = k;
}

}  // namespace

Lattice::Lattice(double x0, double dx, std::size_t m, double y1, double dy, std::size_t j)
    : x0_(x0), dx_(dx), y1_(y1), dy_(dy), nw_(m + 1), na_(j) {
    if (m < 3) throw ParameterError("lattice: need at least 4 wealth nodes");
    if (j < 5) throw ParameterError("lattice: need at least 5 base slices");
    if (!(dx > 0.0) || !(dy > 0.0)) throw ParameterError("lattice: spacing must be positive");
    w_.resize(nw_);
    for (std::size_t i = 0; i < nw_; ++i) w_[i] = std::exp(x(i));
    a_.resize(na_);
    a_[0] = 0.0;
    for (std::size_t i = 1; i < na_; ++i) a_[i] = std::exp(y1_ + static_cast<double>(i - 1) * dy_);
}

Lattice Lattice::build(const LatticeSpec& spec, const MarketModel& market, double premium) {
    if (!(premium > 0.0)) throw ParameterError("lattice: premium must be positive");
    if (spec.m < 3 || spec.j < 5) throw ParameterError("lattice: grid too small");
    if (!(spec.w_floor_rel > 0.0 && spec.w_floor_rel < 1.0) ||
        !(spec.a_floor_rel > 0.0 && spec.a_floor_rel < 1.0)) {
        throw ParameterError("lattice: floors must lie in (0, 1)");
    }
    if (!(spec.sigma_multiple > 0.0)) throw ParameterError("lattice: sigma multiple must be positive");

    const double upper = std::max(std::abs(market.log_return_mean()) +
                                      spec.sigma_multiple * market.log_return_stdev(),
                                  0.25);
    const double lp = std::log(premium);
    const auto m_cells = static_cast<long>(spec.m);

    std::size_t kx = 0;
    double dx = 0.0;
    aligned_axis(-std::log(spec.w_floor_rel), upper, static_cast<std::size_t>(spec.m), kx, dx);
    const double x0 = lp - static_cast<double>(kx) * dx;

    // Positive A nodes sit on every k-th W node, anchored at the premium, and
    // reach at least W_M on top and A_min below. The smallest stride that
    // fits the requested slice count is used.
    const long positive = spec.j - 1;
    const long above_cells = m_cells - static_cast<long>(kx);
    const double below_span = -std::log(spec.a_floor_rel);
    long stride = 1;
    long up = 0;
    long down = 0;
    for (;; ++stride) {
        up = (above_cells + stride - 1) / stride;
        down = positive - 1 - up;
        if (down >= 0 && static_cast<double>(down * stride) * dx >= below_span - 1e-12) break;
        if (stride > 4 * m_cells) throw ParameterError("lattice: cannot fit the base grid");
    }
    const double dy = static_cast<double>(stride) * dx;
    const double y1 = lp - static_cast<double>(down) * dy;

    Lattice lat(x0, dx, static_cast<std::size_t>(spec.m), y1, dy, static_cast<std::size_t>(spec.j));
    // Shared nodes take identical values so jump results land on them bit for bit.
    lat.w_[kx] = premium;
    for (long i = 1; i <= positive; ++i) {
        const long w_index = static_cast<long>(kx) + (i - 1 - down) * stride;
        if (w_index >= 0 && w_index <= m_cells) lat.a_[static_cast<std::size_t>(i)] = lat.w_[static_cast<std::size_t>(w_index)];
    }
    return lat;
}

long Lattice::find_base(double a) const {
    if (a == 0.0) return 0;
    if (!(a > 0.0)) return -1;
    const double pos = (std::log(a) - y1_) / dy_;
    const long j = std::lround(pos) + 1;
    if (j < 1 || j >= static_cast<long>(na_)) return -1;
    return std::abs(a_[j] - a) <= 1e-12 * a ? j : -1;
}

long Lattice::find_wealth(double w) const {
    if (!(w > 0.0)) return -1;
    const long m = std::lround((std::log(w) - x0_) / dx_);
    if (m < 0 || m >= static_cast<long>(nw_)) return -1;
    return std::abs(w_[m] - w) <= 1e-12 * w ? m : -1;
}

void SliceCells::build(const double* y, std::size_t nw, double h, long kink) {
    d2_.resize(nw);
    work_.resize(nw);
    dl.resize(nw - 1);
    dr.resize(nw - 1);
    const std::span<const double> all(y, nw);
    const std::span<double> d2(d2_);
    if (kink < 2 || kink > static_cast<long>(nw) - 3) {
        natural_spline_uniform_d2(all, h, d2, work_);
    } else {
        const auto k = static_cast<std::size_t>(kink);
        spline_uniform_d2(all.subspan(0, k + 1), h, SplineEnd::natural, SplineEnd::extrapolated,
                          d2.subspan(0, k + 1), work_);
        const double left = d2_[k];
        spline_uniform_d2(all.subspan(k), h, SplineEnd::extrapolated, SplineEnd::natural,
                          d2.subspan(k), work_);
        for (std::size_t c = 0; c + 1 < nw; ++c) {
            dl[c] = d2_[c];
            dr[c] = c + 1 == k ? left : d2_[c + 1];
        }
        return;
    }
    for (std::size_t c = 0; c + 1 < nw; ++c) {
        dl[c] = d2_[c];
        dr[c] = d2_[c + 1];
    }
}

double SliceCells::end_slope(const double* y, std::size_t nw, double h) const {
    const std::size_t c = nw - 2;
    return (y[c + 1] - y[c]) / h + h * (dl[c] + 2.0 * dr[c]) / 6.0;
}

SliceSpline::SliceSpline(const Lattice& lattice, const double* row, long kink)
    : x0_(lattice.x0()), h_(lattice.dx()), y_(row, row + lattice.w_size()) {
    cells_.build(y_.data(), y_.size(), h_, kink);
    slope_ = cells_.end_slope(y_.data(), y_.size(), h_);
}

double SliceSpline::operator()(double wealth) const {
    const double x = wealth > 0.0 ? std::max(std::log(wealth), x0_) : x0_;
    const double pos = (x - x0_) / h_;
    const std::size_t last = y_.size() - 1;
    if (pos >= static_cast<double>(last)) {
        return y_[last] + slope_ * (pos - static_cast<double>(last)) * h_;
    }
    const auto c = static_cast<std::size_t>(pos);
    return cubic_cell_value(y_[c], y_[c + 1], cells_.dl[c], cells_.dr[c], h_,
                            pos - static_cast<double>(c));
}

void check_finite(const Surface& s, const Lattice& lattice, const char* stage, std::size_t n) {
    for (std::size_t j = 0; j < s.na; ++j) {
        for (std::size_t m = 0; m < s.nw; ++m) {
            if (!std::isfinite(s.at(j, m))) {
                std::ostringstream msg;
                msg << stage << ": non-finite value at event " << n << ", W=" << lattice.wealth(m)
                    << " (m=" << m << "), A=" << lattice.base(j) << " (j=" << j << ")";
                throw NumericalError(msg.str());
            }
        }
    }
}

SurfaceInterpolator::SurfaceInterpolator(const Lattice& lattice, const Surface& surface)
    : lattice_(&lattice),
      surface_(&surface),
      upper_(lattice.x0(), lattice.dx(), surface.nw, lattice.y1(), lattice.dy(), surface.na - 1,
             std::vector<double>(surface.v.begin() + static_cast<long>(surface.nw), surface.v.end())),
      d2_zero_(surface.nw) {
    central_second_differences(std::span<const double>(surface.row(0), surface.nw), lattice.dx(),
                               d2_zero_);
}

double SurfaceInterpolator::clamp_x(double wealth) const {
    if (!(wealth > 0.0)) return lattice_->x0();
    return std::max(std::log(wealth), lattice_->x0());
}

double SurfaceInterpolator::zero_row(double x) const {
    const double* y = surface_->row(0);
    const std::size_t n = surface_->nw;
    const double h = lattice_->dx();
    const double pos = (x - lattice_->x0()) / h;
    const double last = static_cast<double>(n - 1);
    if (pos >= last) {
        const double slope = (y[n - 1] - y[n - 2]) / h + h * (d2_zero_[n - 2] + 2.0 * d2_zero_[n - 1]) / 6.0;
        return y[n - 1] + slope * (pos - last) * h;
    }
    const auto i = static_cast<std::size_t>(std::max(pos, 0.0));
    return cubic_cell_value(y[i], y[i + 1], d2_zero_[i], d2_zero_[i + 1], h,
                            std::max(pos, 0.0) - static_cast<double>(i));
}

double SurfaceInterpolator::row_value(std::size_t j, double wealth) const {
    const double x = clamp_x(wealth);
    return j == 0 ? zero_row(x) : upper_.eval_row(j - 1, x);
}

double SurfaceInterpolator::operator()(double wealth, double base) const {
    const double x = clamp_x(wealth);
    if (!(base > 0.0)) return zero_row(x);
    const double a1 = lattice_->base(1);
    if (base < a1) {
        const double f = base / a1;
        return (1.0 - f) * zero_row(x) + f * upper_.eval_row(0, x);
    }
    return upper_(x, std::log(base));
}

}  // namespace gmxb
