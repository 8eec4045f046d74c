#include "pfkrylov/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pfk {

double normal_icdf(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw InputError("normal_icdf requires p in (0,1)");
    }
    // Acklam's rational approximation.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley step against the exact CDF.
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    x -= u / (1.0 + x * u / 2.0);
    return x;
}

double standard_normal(std::mt19937_64& gen) {
    // 53-bit uniform shifted into the open interval (0,1).
    const double u = (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
    return normal_icdf(u);
}

std::vector<double> gen_synthetic(const SyntheticConfig& cfg) {
    if (cfg.T < 1) throw InputError("synthetic horizon T must be >= 1");
    if (cfg.noise_std < 0.0) throw InputError("noise_std must be nonnegative");
    std::mt19937_64 gen(cfg.seed);
    std::vector<double> x(static_cast<std::size_t>(cfg.T) + 1);
    x[0] = cfg.x0;
    for (int t = 0; t < cfg.T; ++t) {
        const double xi = cfg.noise_std > 0.0 ? cfg.noise_std * standard_normal(gen) : 0.0;
        x[t + 1] = 0.99 * x[t] * std::cos(0.1 * x[t]) + xi;
    }
    return x;
}

Series delay_embed(std::span<const double> series, int p) {
    if (p < 1) throw InputError("delay embedding needs p >= 1");
    const int len = static_cast<int>(series.size());
    if (len < p) {
        throw InputError("series of length " + std::to_string(len) +
                         " is shorter than delay " + std::to_string(p));
    }
    Series out(len - p + 1);
    for (int t = 0; t <= len - p; ++t) {
        StateVector v(p);
        for (int k = 0; k < p; ++k) v(k) = series[t + p - 1 - k];  // newest first
        out[t] = std::move(v);
    }
    return out;
}

ARModel ar_fit(std::span<const double> series, int p) {
    if (p < 1) throw InputError("AR order must be >= 1");
    const int len = static_cast<int>(series.size());
    if (len < 2 * p + 1) {
        throw InputError("AR fit needs at least " + std::to_string(2 * p + 1) +
                         " samples, got " + std::to_string(len));
    }
    const auto [mn, mx] = std::minmax_element(series.begin(), series.end());
    if (*mn == *mx) {
        throw InputError("AR fit: degenerate (constant) design");
    }
    const int rows = len - p;
    Eigen::MatrixXd X(rows, p);
    Eigen::VectorXd y(rows);
    for (int r = 0; r < rows; ++r) {
        const int t = p - 1 + r;
        for (int i = 0; i < p; ++i) X(r, i) = series[t - i];
        y(r) = series[t + 1];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < p) {
        throw InputError("AR fit: rank-deficient design (rank " +
                         std::to_string(qr.rank()) + " < order " + std::to_string(p) + ")");
    }
    ARModel model;
    model.order = p;
    model.coeffs = qr.solve(y);
    const double ssr = (y - X * model.coeffs).squaredNorm();
    model.residual_std = rows > p ? std::sqrt(ssr / (rows - p)) : 0.0;
    return model;
}

AbnormalityTrace ar_score(const ARModel& model, std::span<const double> series, int t_start,
                          int t_end) {
    if (!(model.residual_std > 0.0)) {
        throw InputError("AR scoring requires a positive residual_std");
    }
    const int len = static_cast<int>(series.size());
    const int p = model.order;
    if (t_start < p) {
        throw InputError("AR score range must start at t >= order " + std::to_string(p));
    }
    if (t_end < t_start || t_end > len) {
        throw InputError("invalid AR score range");
    }
    AbnormalityTrace trace;
    trace.method = "ar";
    trace.S = p;
    trace.N = 0;
    for (int t = t_start; t < t_end; ++t) {
        double pred = 0.0;
        for (int i = 0; i < p; ++i) pred += model.coeffs(i) * series[t - 1 - i];
        trace.t.push_back(t);
        trace.score.push_back(std::abs(series[t] - pred) / model.residual_std);
        trace.denominator.push_back(model.residual_std);
        trace.degenerate.push_back(0);
    }
    return trace;
}

void inject_spike(std::span<double> series, int t, double magnitude) {
    if (t < 0 || t >= static_cast<int>(series.size())) {
        throw InputError("spike index out of range");
    }
    series[t] += magnitude;
}

void inject_level_shift(std::span<double> series, int start, int end, double delta) {
    if (start < 0 || end < start || end >= static_cast<int>(series.size())) {
        throw InputError("level shift interval out of range");
    }
    for (int i = start; i <= end; ++i) series[i] += delta;
}

}  // namespace pfk
