#include "pfkrylov/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pfk {

WeightScheme WeightScheme::build(Complex gamma, int max_order) {
    const double mag = std::abs(gamma);
    if (!(mag > 0.0) || !std::isfinite(mag)) {
        throw InputError("shift gamma must be nonzero and finite");
    }
    if (max_order < 0) throw InputError("weight scheme order must be nonnegative");
    WeightScheme w;
    w.gamma = gamma;
    w.coeffs.resize(max_order + 1);
    w.coeffs[0] = Eigen::VectorXcd::Ones(1);
    for (int j = 0; j < max_order; ++j) {
        const Eigen::VectorXcd& prev = w.coeffs[j];
        Eigen::VectorXcd next(j + 2);
        for (int t = 0; t <= j + 1; ++t) {
            Complex v{0.0, 0.0};
            if (t <= j) v += gamma * prev(t);
            if (t >= 1) v -= prev(t - 1);
            next(t) = v;
        }
        w.coeffs[j + 1] = std::move(next);
    }
    return w;
}

Eigen::MatrixXcd weight_gram(const Eigen::MatrixXd& G, const WeightScheme& scheme) {
    const int m = static_cast<int>(scheme.coeffs.size());
    if (G.rows() != m || G.cols() != m) {
        throw InputError("weight_gram: G must be " + std::to_string(m) + "x" +
                         std::to_string(m) + " for a scheme of order " + std::to_string(m - 1));
    }
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(m, m);
    for (int a = 0; a < m; ++a) U.col(a).head(a + 1) = scheme.coeffs[a];
    // Column-linear layout M(a,b) = <w_b, w_a>, matching G(t,i) = <Phi_i, Phi_t>.
    return U.adjoint() * G * U;
}

namespace {

// <sum_j x_j v_j, sum_l y_l v_l> for columns stored with the column-linear
// Gram layout B(a,b) = <v_b, v_a>: the value is y^H B x.
Complex gram_inner(const Eigen::MatrixXcd& B, const Eigen::VectorXcd& x,
                   const Eigen::VectorXcd& y) {
    return (y.adjoint() * (B * x))(0, 0);
}

}  // namespace

Eigen::MatrixXcd qr_from_gram(const Eigen::MatrixXcd& B, int n_basis, const QrOptions& opts) {
    const int m = static_cast<int>(B.rows());
    if (B.cols() != m) throw InputError("qr_from_gram: B must be square");
    if (n_basis < 1 || n_basis > m) {
        throw InputError("qr_from_gram: basis count must lie in [1, " + std::to_string(m) + "]");
    }
    // Column i of A holds the coefficients of q_i over the original columns.
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(m, n_basis);
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(n_basis, m);
    for (int t = 0; t < m; ++t) {
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(m);
        c(t) = Complex{1.0, 0.0};
        const int limit = std::min(t, n_basis);
        for (int i = 0; i < limit; ++i) {
            const Complex r = gram_inner(B, c, A.col(i));
            R(i, t) += r;
            c -= r * A.col(i);
        }
        if (opts.reorthogonalize) {
            for (int i = 0; i < limit; ++i) {
                const Complex d = gram_inner(B, c, A.col(i));
                R(i, t) += d;
                c -= d * A.col(i);
            }
        }
        if (t < n_basis) {
            const double col_sq = std::real(B(t, t));
            const double res_sq = std::real(gram_inner(B, c, c));
            // Values at or below the threshold (including negative rounding
            // artifacts) go to the error path, never to a zero pivot.
            if (!(res_sq > kQrEpsilon * col_sq)) {
                throw QrBreakdownError(
                    t, "QR breakdown at column " + std::to_string(t) +
                           ": Krylov vectors are numerically dependent (residual " +
                           std::to_string(res_sq) + " vs column norm " + std::to_string(col_sq) +
                           "); reduce S");
            }
            const double diag = std::sqrt(res_sq);
            R(t, t) = diag;
            A.col(t) = c / diag;
        }
    }
    return R;
}

OperatorEstimate arnoldi_estimate(const MeasureGram& gram, const QrOptions& opts) {
    const int S = gram.plan.S;
    const Eigen::MatrixXcd B = gram.G.cast<Complex>();
    const Eigen::MatrixXcd Rext = qr_from_gram(B, S, opts);  // S x (S+1)
    OperatorEstimate est;
    est.method = Method::Arnoldi;
    est.plan = gram.plan;
    est.spec = gram.spec;
    est.R = Rext.leftCols(S);
    const Eigen::MatrixXcd coef = Rext.rightCols(S);  // coordinates of Phi(mu_1..mu_S)
    est.Ktilde = est.R.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(coef);
    est.basis_gram = B.topLeftCorner(S, S);
    est.train = gram.points;
    return est;
}

OperatorEstimate shift_invert_estimate(const MeasureGram& gram, Complex gamma,
                                       const QrOptions& opts) {
    const int S = gram.plan.S;
    WeightScheme scheme = WeightScheme::build(gamma, S);
    const Eigen::MatrixXcd M = weight_gram(gram.G, scheme);
    const Eigen::MatrixXcd B = M.block(1, 1, S, S);  // basis columns w_1..w_S
    Eigen::MatrixXcd R = qr_from_gram(B, S, opts);

    // (Q* Psi_1)(i,t) = <w_t, q_i>; the raw inner products against the basis
    // columns are <w_t, w_{i+1}> = M(i+1, t), so solve R^H P = cross.
    const Eigen::MatrixXcd cross = M.block(1, 0, S, S);
    const Eigen::MatrixXcd P = R.adjoint().triangularView<Eigen::Lower>().solve(cross);
    Eigen::MatrixXcd Ltilde = R.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(P);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Ltilde);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(S - 1);
    const double cond =
        smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond < kCondLimit)) {
        throw IllConditionedError(
            cond, "Ltilde is singular to working precision (condition number " +
                      std::to_string(cond) + "); try a different gamma");
    }

    OperatorEstimate est;
    est.method = Method::ShiftInvert;
    est.plan = gram.plan;
    est.spec = gram.spec;
    est.gamma = gamma;
    est.R = std::move(R);
    est.Ltilde = Ltilde;
    est.cond_L = cond;
    const Eigen::MatrixXcd Linv =
        Ltilde.partialPivLu().solve(Eigen::MatrixXcd::Identity(S, S));
    est.Ktilde = gamma * Eigen::MatrixXcd::Identity(S, S) - Linv;
    est.basis_gram = B;
    est.weights = std::move(scheme);
    est.train = gram.points;
    return est;
}

double rkhs_norm_in_basis(const Eigen::MatrixXcd& B, const Eigen::VectorXcd& c) {
    if (B.rows() != c.size() || B.cols() != c.size()) {
        throw InputError("rkhs_norm_in_basis: coefficient length must match Gram size");
    }
    const double sq = std::real(gram_inner(B, c, c));
    return std::sqrt(std::max(0.0, sq));
}

}  // namespace pfk
