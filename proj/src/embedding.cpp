#include "pfkrylov/embedding.hpp"

namespace pfk {

EmbeddingPlan::EmbeddingPlan(int S_, int N_, bool normalize_)
    : S(S_), N(N_), normalize(normalize_) {
    if (S < 1) throw InputError("embedding plan requires S >= 1, got " + std::to_string(S));
    if (N < 1) throw InputError("embedding plan requires N >= 1, got " + std::to_string(N));
}

std::vector<int> split_indices(const EmbeddingPlan& plan, int t) {
    if (t < 0 || t > plan.S) {
        throw InputError("measure index t must lie in [0, " + std::to_string(plan.S) +
                         "], got " + std::to_string(t));
    }
    std::vector<int> idx(plan.N);
    for (int j = 0; j < plan.N; ++j) idx[j] = t + j * plan.stride();
    return idx;
}

namespace {

void check_length(std::span<const StateVector> series, const EmbeddingPlan& plan) {
    const int need = plan.min_series_length();
    if (static_cast<int>(series.size()) < need) {
        throw InputError("series too short: need at least " + std::to_string(need) +
                         " states for S=" + std::to_string(plan.S) +
                         ", N=" + std::to_string(plan.N) + ", got " +
                         std::to_string(series.size()));
    }
}

}  // namespace

MeasureGram measure_gram(std::span<const StateVector> series, const EmbeddingPlan& plan,
                         const KernelSpec& spec) {
    check_length(series, plan);
    const int S1 = plan.S + 1;
    const int stride = plan.stride();
    Eigen::MatrixXd G(S1, S1);
    for (int t = 0; t < S1; ++t) {
        for (int i = t; i < S1; ++i) {
            double sum = 0.0;
            for (int j = 0; j < plan.N; ++j) {
                for (int l = 0; l < plan.N; ++l) {
                    sum += eval_kernel(spec, series[t + j * stride], series[i + l * stride]);
                }
            }
            const double v =
                plan.normalize ? sum / (static_cast<double>(plan.N) * plan.N) : sum;
            G(t, i) = v;
            G(i, t) = v;
        }
    }
    MeasureGram out;
    out.G = std::move(G);
    out.plan = plan;
    out.spec = spec;
    out.points.assign(series.begin(), series.begin() + plan.min_series_length());
    return out;
}

Eigen::VectorXd cross_gram(std::span<const StateVector> series, const EmbeddingPlan& plan,
                           const KernelSpec& spec, const StateVector& x) {
    check_length(series, plan);
    const int S1 = plan.S + 1;
    Eigen::VectorXd b(S1);
    for (int i = 0; i < S1; ++i) {
        double sum = 0.0;
        for (int j = 0; j < plan.N; ++j) {
            sum += eval_kernel(spec, series[i + j * plan.stride()], x);
        }
        b(i) = plan.normalize ? sum / plan.N : sum;
    }
    return b;
}

}  // namespace pfk
