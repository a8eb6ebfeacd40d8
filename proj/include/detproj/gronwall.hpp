#pragma once

#include <vector>

#include "detproj/core.hpp"

namespace detproj::gronwall {

/// Uniformly sampled time series.
struct TimeSeries {
    double t0 = 0.0;
    double stride = 0.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double time(std::size_t i) const { return t0 + stride * static_cast<double>(i); }

    static TimeSeries from_times(const std::vector<double>& times,
                                 const std::vector<double>& values) {
        require(times.size() == values.size() && times.size() >= 2,
                "TimeSeries: need matching times/values with >= 2 samples");
        TimeSeries ts;
        ts.t0 = times.front();
        ts.stride = times[1] - times[0];
        require(ts.stride > 0.0, "TimeSeries: times must increase");
        for (std::size_t i = 1; i < times.size(); ++i)
            require(std::abs(times[i] - times[i - 1] - ts.stride) <= 1e-12 * (1.0 + ts.stride),
                    "TimeSeries: non-uniform stride");
        ts.values = values;
        for (double v : values) ensure(std::isfinite(v), "TimeSeries: non-finite value");
        return ts;
    }

    template <class F>
    static TimeSeries sample(F&& fn, double t0, double stride, std::size_t n) {
        TimeSeries ts;
        ts.t0 = t0;
        ts.stride = stride;
        ts.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) ts.values[i] = fn(ts.time(i));
        return ts;
    }
};

namespace detail {

/// O(1) trapezoid window averages over a sampled series via prefix sums.
class WindowAverager {
  public:
    explicit WindowAverager(const std::vector<double>& values) : values_(&values) {
        prefix_.resize(values.size() + 1, 0.0);
        for (std::size_t i = 0; i < values.size(); ++i) prefix_[i + 1] = prefix_[i] + values[i];
    }

    /// Trapezoid average over the window of w samples starting at index i.
    double average(std::size_t i, std::size_t w) const {
        double sum = prefix_[i + w + 1] - prefix_[i] -
                     0.5 * ((*values_)[i] + (*values_)[i + w]);
        return sum / static_cast<double>(w);
    }

  private:
    const std::vector<double>* values_;
    std::vector<double> prefix_;
};

inline double window_average(const TimeSeries& ts, std::size_t i, std::size_t w) {
    return WindowAverager(ts.values).average(i, w);
}

}  // namespace detail

/// Finite-horizon proxy of the hypotheses of the generalized Gronwall lemma:
/// the liminf/limsup/limit of window averages become min/max/last over
/// windows that start in the tail fraction of the series.
struct GronwallReport {
    double T = 0.0;                 // effective window length (snapped to the grid)
    double m = 0.0;                 // min tail window average of alpha
    double M = 0.0;                 // max tail window average of alpha^- = max(-alpha, 0)
    double beta_plus_limit = 0.0;   // last-window average of beta^+ = max(beta, 0)
    double tol_beta = 0.0;
    std::array<bool, 3> hypotheses_met{false, false, false};  // m>0, M finite, beta+ -> 0
    std::vector<double> y_tail;     // filled by callers that track a y series
};

inline GronwallReport check_hypotheses(const TimeSeries& alpha, const TimeSeries& beta,
                                       double T, double tail_fraction = 0.5,
                                       double tol_beta_rel = 1e-3) {
    require(alpha.size() == beta.size() && alpha.stride == beta.stride && alpha.t0 == beta.t0,
            "check_hypotheses: alpha/beta series mismatch");
    require(T > 0.0 && tail_fraction > 0.0 && tail_fraction <= 1.0,
            "check_hypotheses: bad T or tail fraction");
    const std::size_t n = alpha.size();
    const std::size_t w = std::max<std::size_t>(1, std::llround(T / alpha.stride));
    require(w + 1 <= n, "check_hypotheses: window longer than series");

    std::size_t tail_start =
        static_cast<std::size_t>(static_cast<double>(n - 1) * (1.0 - tail_fraction));
    require(n - 1 >= w && tail_start <= n - 1 - w,
            "check_hypotheses: tail has no full window");
    std::size_t n_windows = (n - 1 - w) - tail_start + 1;
    require(n_windows >= 5, "check_hypotheses: tail must cover >= 5 windows");

    GronwallReport rep;
    rep.T = static_cast<double>(w) * alpha.stride;

    // work on tail slices only, so the report is exactly independent of the
    // transient samples before the tail
    std::vector<double> tail_alpha(alpha.values.begin() + tail_start, alpha.values.end());
    std::vector<double> tail_alpha_minus = tail_alpha, tail_beta_plus(
        beta.values.begin() + tail_start, beta.values.end());
    for (auto& v : tail_alpha_minus) v = std::max(-v, 0.0);
    for (auto& v : tail_beta_plus) v = std::max(v, 0.0);

    detail::WindowAverager avg_alpha(tail_alpha), avg_alpha_minus(tail_alpha_minus),
        avg_beta_plus(tail_beta_plus);
    const std::size_t tn = tail_alpha.size();
    rep.m = std::numeric_limits<double>::max();
    rep.M = 0.0;
    for (std::size_t i = 0; i + w < tn; ++i) {
        rep.m = std::min(rep.m, avg_alpha.average(i, w));
        rep.M = std::max(rep.M, avg_alpha_minus.average(i, w));
    }
    // beta^+ >= 0; the prefix-sum difference can leave -1e-18 noise
    rep.beta_plus_limit = std::max(0.0, avg_beta_plus.average(tn - 1 - w, w));

    double beta_scale = 0.0;
    for (double v : beta.values) beta_scale = std::max(beta_scale, std::abs(v));
    rep.tol_beta = tol_beta_rel * beta_scale;

    rep.hypotheses_met = {rep.m > 0.0, std::isfinite(rep.M),
                          rep.beta_plus_limit <= rep.tol_beta};
    return rep;
}

/// Integrates the extremal envelope y' = -alpha y + beta on the sample grid
/// by classical RK4; midpoint coefficient values come from 4-point cubic
/// interpolation, so smooth alpha/beta keep the full 4th order. Any series
/// satisfying y' + alpha y <= beta with the same y0 stays below this
/// envelope pointwise.
inline TimeSeries integrate_inequality(const TimeSeries& alpha, const TimeSeries& beta,
                                       double y0) {
    require(alpha.size() == beta.size() && alpha.stride == beta.stride,
            "integrate_inequality: alpha/beta series mismatch");
    require(y0 >= 0.0, "integrate_inequality: y0 must be non-negative");
    const std::size_t n = alpha.size();
    require(n >= 2, "integrate_inequality: need >= 2 samples");

    auto midpoint = [&](const TimeSeries& ts, std::size_t i) {
        // cubic through samples (i-1, i, i+1, i+2) evaluated at i + 1/2,
        // shifted at the ends
        const auto& v = ts.values;
        if (i >= 1 && i + 2 < n)
            return (-v[i - 1] + 9.0 * v[i] + 9.0 * v[i + 1] - v[i + 2]) / 16.0;
        if (n >= 4) {
            if (i == 0)
                return 0.3125 * v[0] + 0.9375 * v[1] - 0.3125 * v[2] + 0.0625 * v[3];
            return 0.0625 * v[n - 4] - 0.3125 * v[n - 3] + 0.9375 * v[n - 2] + 0.3125 * v[n - 1];
        }
        return 0.5 * (v[i] + v[i + 1]);
    };

    TimeSeries y;
    y.t0 = alpha.t0;
    y.stride = alpha.stride;
    y.values.resize(n);
    y.values[0] = y0;
    const double h = alpha.stride;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double a0 = alpha.values[i], b0 = beta.values[i];
        double am = midpoint(alpha, i), bm = midpoint(beta, i);
        double a1 = alpha.values[i + 1], b1 = beta.values[i + 1];
        double yi = y.values[i];
        double k1 = -a0 * yi + b0;
        double k2 = -am * (yi + 0.5 * h * k1) + bm;
        double k3 = -am * (yi + 0.5 * h * k2) + bm;
        double k4 = -a1 * (yi + h * k3) + b1;
        y.values[i + 1] = yi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ensure(std::isfinite(y.values[i + 1]), "integrate_inequality: non-finite envelope");
    }
    return y;
}

/// Decay verdict for the lemma's conclusion lim y = 0: true iff the max of y
/// over the final window is below tol_conclusion = rel * y(0) and below 10%
/// of the max over the first window.
struct ConclusionReport {
    bool passed = false;
    double first_window_max = 0.0;
    double final_window_max = 0.0;
    double tol = 0.0;
};

inline ConclusionReport verify_conclusion(const TimeSeries& y, double window,
                                          double tol_conclusion_rel = 1e-6) {
    require(window > 0.0, "verify_conclusion: window must be positive");
    for (double v : y.values) require(v >= 0.0, "verify_conclusion: y must be non-negative");
    const std::size_t n = y.size();
    const std::size_t w = std::min<std::size_t>(
        n - 1, std::max<std::size_t>(1, std::llround(window / y.stride)));
    ConclusionReport rep;
    for (std::size_t i = 0; i <= w; ++i)
        rep.first_window_max = std::max(rep.first_window_max, y.values[i]);
    for (std::size_t i = n - 1 - w; i < n; ++i)
        rep.final_window_max = std::max(rep.final_window_max, y.values[i]);
    rep.tol = tol_conclusion_rel * y.values.front();
    rep.passed = rep.final_window_max <= rep.tol &&
                 rep.final_window_max <= 0.1 * rep.first_window_max;
    return rep;
}

}  // namespace detproj::gronwall
