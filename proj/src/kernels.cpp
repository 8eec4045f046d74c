#include "pfkrylov/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace pfk {

KernelSpec::KernelSpec(KernelFamily f, double c) : family(f), bandwidth(c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw InputError("kernel bandwidth must be a positive finite real, got " +
                         std::to_string(c));
    }
}

namespace {

double distance(KernelFamily family, const StateVector& x, const StateVector& y) {
    if (x.size() != y.size()) {
        throw InputError("kernel arguments have mismatched dimensions: " +
                         std::to_string(x.size()) + " vs " + std::to_string(y.size()));
    }
    if (family == KernelFamily::Gaussian) {
        return (x - y).squaredNorm();
    }
    return (x - y).lpNorm<1>();
}

}  // namespace

double eval_kernel(const KernelSpec& spec, const StateVector& x, const StateVector& y) {
    return std::exp(-spec.bandwidth * distance(spec.family, x, y));
}

Eigen::MatrixXd gram_block(const KernelSpec& spec, std::span<const StateVector> A,
                           std::span<const StateVector> B) {
    const Eigen::Index m = static_cast<Eigen::Index>(A.size());
    const Eigen::Index n = static_cast<Eigen::Index>(B.size());
    Eigen::MatrixXd out(m, n);
    const bool same = A.data() == B.data() && m == n;
    if (same) {
        for (Eigen::Index i = 0; i < m; ++i) {
            out(i, i) = 1.0;
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double v = eval_kernel(spec, A[i], B[j]);
                out(i, j) = v;
                out(j, i) = v;
            }
        }
    } else {
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                out(i, j) = eval_kernel(spec, A[i], B[j]);
            }
        }
    }
    return out;
}

double median_heuristic_bandwidth(KernelFamily family, std::span<const StateVector> points) {
    const std::size_t n = points.size();
    if (n < 2) {
        throw InputError("median heuristic needs at least two points");
    }
    std::vector<double> dists;
    dists.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = distance(family, points[i], points[j]);
            if (family == KernelFamily::Gaussian) d = std::sqrt(d);
            dists.push_back(d);
        }
    }
    const std::size_t mid = dists.size() / 2;
    std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
    double m = dists[mid];
    if (dists.size() % 2 == 0) {
        const double lower = *std::max_element(dists.begin(), dists.begin() + mid);
        m = 0.5 * (lower + m);
    }
    if (m <= 0.0) return 1.0;
    return 1.0 / (2.0 * m * m);
}

}  // namespace pfk
