#pragma once

#include <cstdint>
#include <string>
#include <span>
#include <utility>
#include <vector>

#include "pfkrylov/krylov.hpp"

namespace pfk {

// Denominators at or below this are flagged as degenerate: phi(x_prev) has
// left the learned subspace and the score is treated as maximally abnormal.
inline constexpr double kDenominatorEpsilon = 1e-12;

// Q* phi(x) in basis coordinates: solves R^H u = b where b[i] is the inner
// product of phi(x) with basis column i (Phi(mu_i) for Arnoldi, w_{i+1}
// expanded through the weight coefficients for ShiftInvert).
Eigen::VectorXcd project_feature(const OperatorEstimate& est, const StateVector& x);

struct ScoreDetail {
    double score = 0.0;        // +inf when degenerate
    double denominator = 0.0;  // ||Ktilde Q* phi(x_prev)||
    double numerator_sq_raw = 0.0;  // squared MMD before the zero clamp
    bool degenerate = false;
};

// One-step prediction abnormality:
//   numerator^2 = k(x_curr,x_curr) - 2 Re(v^H Q* phi(x_curr)) + ||v||^2
// with v = Ktilde Q* phi(x_prev); score = numerator / ||v||.
ScoreDetail abnormality_detail(const OperatorEstimate& est, const StateVector& x_prev,
                               const StateVector& x_curr);

// (score, denominator) pair; degenerate inputs yield (+inf, denominator).
std::pair<double, double> abnormality(const OperatorEstimate& est, const StateVector& x_prev,
                                      const StateVector& x_curr);

struct AbnormalityTrace {
    std::vector<int> t;
    std::vector<double> score;
    std::vector<double> denominator;
    std::vector<std::uint8_t> degenerate;  // flagged, never silently dropped
    std::string method;  // "arnoldi", "sia" or "ar"
    int S = 0;
    int N = 0;
    Complex gamma{0.0, 0.0};

    std::size_t size() const { return t.size(); }
};

// Scores t in [t_start, t_end) with abnormality(est, series[t-1], series[t]).
// Indices may be evaluated concurrently; output order is always by t.
AbnormalityTrace score_series(const OperatorEstimate& est, std::span<const StateVector> series,
                              int t_start, int t_end);

}  // namespace pfk
