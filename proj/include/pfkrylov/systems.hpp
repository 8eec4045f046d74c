#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pfkrylov/predictor.hpp"

namespace pfk {

// x_{t+1} = 0.99 x_t cos(0.1 x_t) + xi_t with xi_t ~ N(0, noise_std^2),
// drawn from a seeded mt19937_64 via the inverse normal CDF so traces are
// reproducible across platforms.
struct SyntheticConfig {
    int T = 1;              // horizon; output has T+1 samples
    double x0 = 0.5;
    double noise_std = 0.1;
    std::uint64_t seed = 0;
};

std::vector<double> gen_synthetic(const SyntheticConfig& cfg);

// Standard normal deviate by inverse CDF on a (0,1) uniform from gen.
double standard_normal(std::mt19937_64& gen);

// Inverse of the standard normal CDF (Acklam's approximation refined by one
// Halley step against erfc).
double normal_icdf(double p);

// Output index t is the stacked state [y_{t+p-1}, ..., y_t] (newest first);
// output length = input length - p + 1.
Series delay_embed(std::span<const double> series, int p);

// x_{t+1} = sum_{i=0}^{p-1} c_i x_{t-i} + xi_t
struct ARModel {
    int order = 1;
    Eigen::VectorXd coeffs;
    double residual_std = 0.0;
};

// Least-squares fit over the whole series; requires length >= 2p + 1 and a
// full-rank design (constant series fail).
ARModel ar_fit(std::span<const double> series, int p);

// Standardized one-step residual |x_t - prediction| / residual_std for
// t in [t_start, t_end); requires t_start >= p and residual_std > 0.
AbnormalityTrace ar_score(const ARModel& model, std::span<const double> series, int t_start,
                          int t_end);

// Anomaly injection helpers for tests and benchmarks.
void inject_spike(std::span<double> series, int t, double magnitude);
void inject_level_shift(std::span<double> series, int start, int end, double delta);

}  // namespace pfk
