#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "pfkrylov/embedding.hpp"

namespace pfk {

using Complex = std::complex<double>;

enum class Method { Arnoldi, ShiftInvert };

// Relative breakdown threshold for the Gram-only QR.
inline constexpr double kQrEpsilon = 1e-10;
// Ltilde condition numbers above this abort shift-invert estimation.
inline constexpr double kCondLimit = 1e12;

// Coefficients of w_j = sum_t C(j,t) (-1)^t gamma^(j-t) Phi(mu_t) over the
// measure embeddings. Built by the Pascal recursion
//   coeffs[j+1][t] = gamma * coeffs[j][t] - coeffs[j][t-1]
// (out-of-range terms zero) rather than factorials.
struct WeightScheme {
    Complex gamma{0.0, 0.0};
    std::vector<Eigen::VectorXcd> coeffs;  // coeffs[j] has length j+1

    static WeightScheme build(Complex gamma, int max_order);
};

// Pairwise inner products of the weight vectors for a,b in 0..S, stored
// column-linear like every Gram here: M(a,b) = <w_b, w_a>. Inner products
// are linear in the first argument and conjugate-linear in the second
// throughout.
Eigen::MatrixXcd weight_gram(const Eigen::MatrixXd& G, const WeightScheme& scheme);

struct QrOptions {
    bool reorthogonalize = false;  // one extra MGS sweep per column
};

// Modified Gram-Schmidt carried out purely in coordinates against the Gram
// matrix B(a,b) = <v_b, v_a> of the m basis candidates. The first n_basis
// columns are orthonormalized; every column is expressed in the resulting
// q-basis. Returns the n_basis x m coefficient matrix R (upper triangular
// leading block, strictly positive real diagonal), so R^H R reconstructs B.
// Throws QrBreakdownError naming the failing column when a residual squared
// norm drops below kQrEpsilon relative to the column's squared norm.
Eigen::MatrixXcd qr_from_gram(const Eigen::MatrixXcd& B, int n_basis,
                              const QrOptions& opts = {});

inline Eigen::MatrixXcd qr_from_gram(const Eigen::MatrixXcd& B, const QrOptions& opts = {}) {
    return qr_from_gram(B, static_cast<int>(B.rows()), opts);
}

// Projected operator estimate plus everything needed to apply Q* to new
// points. Immutable after construction; safe to share across threads.
struct OperatorEstimate {
    Method method = Method::Arnoldi;
    EmbeddingPlan plan;
    KernelSpec spec;
    Complex gamma{0.0, 0.0};    // ShiftInvert only
    Eigen::MatrixXcd R;         // SxS, upper triangular, positive real diagonal
    Eigen::MatrixXcd Ktilde;    // SxS
    Eigen::MatrixXcd Ltilde;    // SxS, ShiftInvert only (empty otherwise)
    double cond_L = 0.0;        // ShiftInvert diagnostic
    Eigen::MatrixXcd basis_gram;  // Gram of the basis columns (diagnostic; may be empty)
    WeightScheme weights;       // ShiftInvert only
    Series train;               // the (S+1)*N training states

    int S() const { return plan.S; }
};

// Ktilde = R_{1:S} R_{0:S-1}^{-1} from the QR of [Phi(mu_0), ..., Phi(mu_S)].
OperatorEstimate arnoldi_estimate(const MeasureGram& gram, const QrOptions& opts = {});

// Projects (gamma I - K)^{-1} onto span{w_1, ..., w_S} and recovers
// Ktilde = gamma I - Ltilde^{-1}.
OperatorEstimate shift_invert_estimate(const MeasureGram& gram, Complex gamma,
                                       const QrOptions& opts = {});

// ||sum_a c_a v_a||_k for basis columns with Gram B: sqrt(Re(c^T B conj(c))).
double rkhs_norm_in_basis(const Eigen::MatrixXcd& B, const Eigen::VectorXcd& c);

}  // namespace pfk
