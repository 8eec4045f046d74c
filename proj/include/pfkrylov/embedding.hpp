#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "pfkrylov/kernels.hpp"

namespace pfk {

// Splits a series into S+1 strided empirical measures: measure t holds the
// N samples {x_t, x_{t+S'}, ..., x_{t+(N-1)S'}} with stride S' = S+1.
struct EmbeddingPlan {
    int S = 1;
    int N = 1;
    bool normalize = true;  // whether the embeddings carry the 1/N factor

    EmbeddingPlan() = default;
    EmbeddingPlan(int S_, int N_, bool normalize_ = true);

    int stride() const { return S + 1; }
    int min_series_length() const { return (S + 1) * N; }
};

// Series indices backing measure t: [t, t+S', ..., t+(N-1)S'], 0 <= t <= S.
std::vector<int> split_indices(const EmbeddingPlan& plan, int t);

// G(t,i) = <Phi(mu_i), Phi(mu_t)>: all RKHS inner products between the
// embedded measures, plus everything needed to evaluate cross-Grams later.
struct MeasureGram {
    Eigen::MatrixXd G;  // (S+1)x(S+1), symmetric, PSD
    EmbeddingPlan plan;
    KernelSpec spec;
    Series points;  // the (S+1)*N states the measures draw from
};

MeasureGram measure_gram(std::span<const StateVector> series, const EmbeddingPlan& plan,
                         const KernelSpec& spec);

// b[i] = <Phi(mu_i), phi(x)> = (1/N if normalize) * sum_j k(x_{i+jS'}, x).
Eigen::VectorXd cross_gram(std::span<const StateVector> series, const EmbeddingPlan& plan,
                           const KernelSpec& spec, const StateVector& x);

}  // namespace pfk
