#pragma once

// Brute-force reference routes used only by tests. Everything here stays
// independent of the library's Gram-recursion path: weight coefficients come
// from the closed-form binomial product, vectors are materialized from a
// factor of the Gram matrix, and projections use dense QR / pseudo-inverses.

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "pfkrylov/embedding.hpp"
#include "pfkrylov/krylov.hpp"

namespace oracle {

using pfk::Complex;

// F with F^T F = G via symmetric eigendecomposition (tiny negatives clamped).
inline Eigen::MatrixXd factor_gram(const Eigen::MatrixXd& G) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    return lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

// C(j,t) (-1)^t gamma^(j-t) from the multiplicative binomial formula.
inline Eigen::VectorXcd closed_form_weights(Complex gamma, int j) {
    Eigen::VectorXcd c(j + 1);
    for (int t = 0; t <= j; ++t) {
        double binom = 1.0;
        for (int k = 0; k < t; ++k) binom = binom * (j - k) / (k + 1);
        binom = std::round(binom);
        Complex g{1.0, 0.0};
        for (int k = 0; k < j - t; ++k) g *= gamma;
        c(t) = (t % 2 ? -binom : binom) * g;
    }
    return c;
}

// Rescale a thin QR so the diagonal of R is positive real.
inline void fix_qr_phases(Eigen::MatrixXcd& Q, Eigen::MatrixXcd& R) {
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
        const Complex d = R(i, i);
        const double mag = std::abs(d);
        const Complex phase = mag > 0.0 ? d / mag : Complex{1.0, 0.0};
        R.row(i) /= phase;
        Q.col(i) *= phase;
    }
}

inline void thin_qr(const Eigen::MatrixXcd& A, Eigen::MatrixXcd& Q, Eigen::MatrixXcd& R) {
    const Eigen::Index cols = A.cols();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
    Q = qr.householderQ() * Eigen::MatrixXcd::Identity(A.rows(), cols);
    R = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    fix_qr_phases(Q, R);
}

// Arnoldi estimate with materialized vectors and a dense QR.
inline Eigen::MatrixXcd arnoldi_vector_route(const Eigen::MatrixXd& G, int S) {
    const Eigen::MatrixXd F = factor_gram(G);  // column t realizes Phi(mu_t)
    const Eigen::MatrixXcd F0 = F.leftCols(S).cast<Complex>();
    const Eigen::MatrixXcd F1 = F.rightCols(S).cast<Complex>();
    Eigen::MatrixXcd Q, R;
    thin_qr(F0, Q, R);
    return (Q.adjoint() * F1) * R.inverse();
}

// Shift-invert estimate with materialized weight vectors and dense inverses.
inline Eigen::MatrixXcd sia_vector_route(const Eigen::MatrixXd& G, Complex gamma, int S) {
    const Eigen::MatrixXd F = factor_gram(G);
    Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(S + 1, S + 1);  // column j = w_j
    for (int j = 0; j <= S; ++j) {
        const Eigen::VectorXcd cw = closed_form_weights(gamma, j);
        for (int t = 0; t <= j; ++t) W.col(j) += cw(t) * F.col(t);
    }
    const Eigen::MatrixXcd W0 = W.rightCols(S);  // w_1 .. w_S
    const Eigen::MatrixXcd W1 = W.leftCols(S);   // w_0 .. w_{S-1}
    Eigen::MatrixXcd Q, R;
    thin_qr(W0, Q, R);
    const Eigen::MatrixXcd Ltilde = (Q.adjoint() * W1) * R.inverse();
    return gamma * Eigen::MatrixXcd::Identity(S, S) - Ltilde.inverse();
}

// Full weight Gram by direct quadruple-loop contraction of the closed-form
// coefficients against G, in the column-linear layout M(a,b) = <w_b, w_a>.
inline Eigen::MatrixXcd contracted_weight_gram(const Eigen::MatrixXd& G, Complex gamma, int S) {
    Eigen::MatrixXcd M(S + 1, S + 1);
    for (int a = 0; a <= S; ++a) {
        const Eigen::VectorXcd ca = closed_form_weights(gamma, a);
        for (int b = 0; b <= S; ++b) {
            const Eigen::VectorXcd cb = closed_form_weights(gamma, b);
            Complex acc{0.0, 0.0};
            for (int j = 0; j <= b; ++j) {
                for (int l = 0; l <= a; ++l) acc += cb(j) * std::conj(ca(l)) * G(j, l);
            }
            M(a, b) = acc;
        }
    }
    return M;
}

// Least-squares coefficients of the columns rhs over basis columns with the
// column-linear Gram B: normal equations B C = rhs, solved with a dense
// pseudo-inverse.
inline Eigen::MatrixXcd gram_lsq(const Eigen::MatrixXcd& B, const Eigen::MatrixXcd& rhs) {
    return B.completeOrthogonalDecomposition().pseudoInverse() * rhs;
}

// Random smooth vector series whose measure Grams stay well conditioned.
inline pfk::Series random_series(std::uint64_t seed, int len, int dim) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    pfk::Series out(len);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
    for (int t = 0; t < len; ++t) {
        for (int k = 0; k < dim; ++k) x(k) = 0.8 * x(k) + 0.7 * normal(gen);
        out[t] = x;
    }
    return out;
}

inline double max_abs(const Eigen::MatrixXcd& A) { return A.cwiseAbs().maxCoeff(); }

}  // namespace oracle
