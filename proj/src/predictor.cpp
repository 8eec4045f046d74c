#include "pfkrylov/predictor.hpp"

#include <cmath>
#include <limits>

namespace pfk {

Eigen::VectorXcd project_feature(const OperatorEstimate& est, const StateVector& x) {
    const Eigen::VectorXd braw = cross_gram(est.train, est.plan, est.spec, x);
    const int S = est.S();
    Eigen::VectorXcd b(S);
    if (est.method == Method::Arnoldi) {
        b = braw.head(S).cast<Complex>();
    } else {
        // <phi(x), w_{i+1}> = sum_j conj(coeffs[i+1][j]) <phi(x), Phi(mu_j)>
        for (int i = 0; i < S; ++i) {
            const Eigen::VectorXcd& cw = est.weights.coeffs[static_cast<std::size_t>(i) + 1];
            Complex acc{0.0, 0.0};
            for (int j = 0; j <= i + 1; ++j) acc += std::conj(cw(j)) * braw(j);
            b(i) = acc;
        }
    }
    // u_j = sum_i conj(R^{-1}(i,j)) b_i, i.e. u = R^{-H} b.
    return est.R.adjoint().triangularView<Eigen::Lower>().solve(b);
}

ScoreDetail abnormality_detail(const OperatorEstimate& est, const StateVector& x_prev,
                               const StateVector& x_curr) {
    const Eigen::VectorXcd u_prev = project_feature(est, x_prev);
    const Eigen::VectorXcd v = est.Ktilde * u_prev;
    const Eigen::VectorXcd u_curr = project_feature(est, x_curr);

    ScoreDetail out;
    out.denominator = v.norm();  // equals ||Q v||_k by orthonormality
    const double kxx = eval_kernel(est.spec, x_curr, x_curr);
    out.numerator_sq_raw = kxx - 2.0 * std::real(v.dot(u_curr)) + v.squaredNorm();
    const double numerator = std::sqrt(std::max(0.0, out.numerator_sq_raw));
    if (out.denominator <= kDenominatorEpsilon) {
        out.degenerate = true;
        out.score = std::numeric_limits<double>::infinity();
    } else {
        out.score = numerator / out.denominator;
    }
    return out;
}

std::pair<double, double> abnormality(const OperatorEstimate& est, const StateVector& x_prev,
                                      const StateVector& x_curr) {
    const ScoreDetail d = abnormality_detail(est, x_prev, x_curr);
    return {d.score, d.denominator};
}

AbnormalityTrace score_series(const OperatorEstimate& est, std::span<const StateVector> series,
                              int t_start, int t_end) {
    const int len = static_cast<int>(series.size());
    if (t_start < 1) {
        throw InputError("score range must start at t >= 1, got " + std::to_string(t_start));
    }
    if (t_end < t_start) {
        throw InputError("score range end precedes start");
    }
    if (t_end > len) {
        throw InputError("score range end " + std::to_string(t_end) +
                         " exceeds series length " + std::to_string(len));
    }
    AbnormalityTrace trace;
    trace.method = est.method == Method::Arnoldi ? "arnoldi" : "sia";
    trace.S = est.S();
    trace.N = est.plan.N;
    trace.gamma = est.gamma;
    const int count = t_end - t_start;
    trace.t.reserve(count);
    trace.score.reserve(count);
    trace.denominator.reserve(count);
    trace.degenerate.reserve(count);
    for (int t = t_start; t < t_end; ++t) {
        const ScoreDetail d = abnormality_detail(est, series[t - 1], series[t]);
        trace.t.push_back(t);
        trace.score.push_back(d.score);
        trace.denominator.push_back(d.denominator);
        trace.degenerate.push_back(d.degenerate ? 1 : 0);
    }
    return trace;
}

}  // namespace pfk
