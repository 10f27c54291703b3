#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace smolin {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Qubit convention used throughout: qubit 0 is the leftmost tensor factor and
// the most significant bit of a basis index.

Mat pauli(int mu); // 0:I 1:X 2:Y 3:Z

Mat tensor(const Mat& a, const Mat& b);
Vec tensor(const Vec& a, const Vec& b);
Mat pauli_string(int mu, int n_qubits); // sigma_mu^{x n}

int qubit_count(Eigen::Index dim); // throws validation_error unless dim = 2^n

// Relabels basis indices so qubit i of the input sits at position perm[i].
Mat permute_qubits(const Mat& m, const std::vector<int>& perm);

// Transpose restricted to the listed qubits. Involutive, trace preserving.
Mat partial_transpose(const Mat& m, const std::vector<int>& qubits);

// Trace out every qubit not listed; kept qubits stay in ascending order.
Mat partial_trace(const Mat& m, const std::vector<int>& keep);

// Ascending real spectrum. Requires max|M - M^dag| <= 1e-10; the operand is
// symmetrized before solving so MLE output rounding does not leak in.
Eigen::VectorXd hermitian_eigenvalues(const Mat& m);

double hs_norm(const Mat& m); // sqrt(Tr(M^dag M))

// PSD square root with tiny negative eigenvalues clamped to zero.
Mat psd_sqrt(const Mat& m);

} // namespace smolin
