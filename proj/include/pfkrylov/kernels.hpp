#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "pfkrylov/errors.hpp"

namespace pfk {

using StateVector = Eigen::VectorXd;
using Series = std::vector<StateVector>;

enum class KernelFamily { Gaussian, Laplacian };

// Unit-diagonal positive-definite kernel:
//   Gaussian   k(x,y) = exp(-c * ||x-y||^2)
//   Laplacian  k(x,y) = exp(-c * ||x-y||_1)
struct KernelSpec {
    KernelFamily family = KernelFamily::Gaussian;
    double bandwidth = 1.0;  // c > 0

    KernelSpec() = default;
    KernelSpec(KernelFamily f, double c);
};

double eval_kernel(const KernelSpec& spec, const StateVector& x, const StateVector& y);

// Entry (i,j) = k(A[i], B[j]). When A and B alias the same list only the
// upper triangle is evaluated and mirrored, so the result is exactly
// symmetric with unit diagonal.
Eigen::MatrixXd gram_block(const KernelSpec& spec, std::span<const StateVector> A,
                           std::span<const StateVector> B);

// c = 1 / (2 m^2) with m the median pairwise distance of the points, taken
// in the kernel's own metric (L2 for Gaussian, L1 for Laplacian). Returns
// 1.0 when all points coincide (m = 0); downstream QR reports the rank
// deficiency in that case.
double median_heuristic_bandwidth(KernelFamily family, std::span<const StateVector> points);

}  // namespace pfk
