#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "pfkrylov/kernels.hpp"

using namespace pfk;

namespace {

StateVector vec(std::initializer_list<double> xs) {
    StateVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

}  // namespace

TEST_CASE("eval_kernel direct values") {
    const KernelSpec gauss(KernelFamily::Gaussian, 1.0);
    CHECK(eval_kernel(KernelSpec(KernelFamily::Gaussian, 3.2), vec({3.7}), vec({3.7})) == 1.0);
    CHECK(eval_kernel(gauss, vec({0.0}), vec({1.0})) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    const KernelSpec lap(KernelFamily::Laplacian, 0.5);
    CHECK(eval_kernel(lap, vec({0.0, 0.0}), vec({1.0, 1.0})) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(eval_kernel(lap, vec({1.0, 1.0}), vec({1.0, 1.0})) == 1.0);
}

TEST_CASE("eval_kernel rejects mismatched dimensions") {
    const KernelSpec gauss(KernelFamily::Gaussian, 1.0);
    CHECK_THROWS_AS(eval_kernel(gauss, vec({0.0}), vec({0.0, 1.0})), InputError);
}

TEST_CASE("kernel spec requires positive bandwidth") {
    CHECK_THROWS_AS(KernelSpec(KernelFamily::Gaussian, 0.0), InputError);
    CHECK_THROWS_AS(KernelSpec(KernelFamily::Gaussian, -2.0), InputError);
}

TEST_CASE("gram_block direct values") {
    const KernelSpec gauss(KernelFamily::Gaussian, 1.0);
    const Series one = {vec({0.0})};
    const Eigen::MatrixXd g1 = gram_block(gauss, one, one);
    CHECK(g1.rows() == 1);
    CHECK(g1(0, 0) == 1.0);

    const Series two = {vec({0.0}), vec({1.0})};
    const Eigen::MatrixXd g2 = gram_block(gauss, two, two);
    CHECK(g2(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(g2(1, 0) == g2(0, 1));
    CHECK(g2(0, 0) == 1.0);
    CHECK(g2(1, 1) == 1.0);
}

TEST_CASE("gram_block is exactly symmetric and PSD on random point sets") {
    std::mt19937_64 gen(11);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int rep = 0; rep < 6; ++rep) {
        const int n = 4 + static_cast<int>(gen() % 29);  // up to 32
        const int d = 1 + static_cast<int>(gen() % 3);
        Series pts(n);
        for (int i = 0; i < n; ++i) {
            StateVector v(d);
            for (int k = 0; k < d; ++k) v(k) = normal(gen);
            pts[i] = v;
        }
        const KernelSpec spec(rep % 2 ? KernelFamily::Laplacian : KernelFamily::Gaussian, 0.7);
        const Eigen::MatrixXd G = gram_block(spec, pts, pts);
        CHECK((G - G.transpose()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("eval_kernel is strictly decreasing in the bandwidth") {
    const StateVector x = vec({0.2, -0.4});
    const StateVector y = vec({1.1, 0.3});
    double prev = 1.0;
    for (double c : {0.1, 0.5, 1.0, 2.0, 7.0}) {
        for (auto family : {KernelFamily::Gaussian, KernelFamily::Laplacian}) {
            const double v = eval_kernel(KernelSpec(family, c), x, y);
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
        const double v = eval_kernel(KernelSpec(KernelFamily::Gaussian, c), x, y);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("median heuristic bandwidth") {
    // Two points: the median distance is just their distance.
    const Series two = {vec({0.0}), vec({2.0})};
    CHECK(median_heuristic_bandwidth(KernelFamily::Gaussian, two) ==
          doctest::Approx(1.0 / 8.0).epsilon(1e-14));
    // Laplacian uses the L1 metric.
    const Series pair = {vec({0.0, 0.0}), vec({1.0, 1.0})};
    CHECK(median_heuristic_bandwidth(KernelFamily::Laplacian, pair) ==
          doctest::Approx(1.0 / 8.0).epsilon(1e-14));
    CHECK(median_heuristic_bandwidth(KernelFamily::Gaussian, pair) ==
          doctest::Approx(1.0 / 4.0).epsilon(1e-14));
    // Coincident points fall back to 1.0.
    const Series same = {vec({3.0}), vec({3.0}), vec({3.0})};
    CHECK(median_heuristic_bandwidth(KernelFamily::Gaussian, same) == 1.0);
}
