#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smolin/linalg.hpp"

namespace smolin {

// W = I - X^{x4} - Y^{x4} - Z^{x4}; nonnegative on every separable state.
Mat witness_operator();

double witness_expectation(const Mat& rho); // Tr(W rho), four qubits only

struct MinPtResult {
    double value = 0.0;
    std::vector<int> cut; // transposed qubit subset achieving the minimum
    int n_qubits = 0;
    std::string cut_label() const; // e.g. "02:13"
};

// Four qubits: minimum PT eigenvalue over the three two-two cuts.
// Two qubits: the single-cut PT minimum.
MinPtResult min_pt_eigenvalue(const Mat& rho);

double fidelity(const Mat& rho, const Mat& sigma); // (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2

double tangle(const Mat& rho); // squared concurrence, two qubits only

// Seesaw over pure product states |a>_0 x |b>_123: alternately replace each
// factor by the extremal eigenvector of the operator contracted with the
// other. Lower (upper) bound on the true max (min); improves with restarts.
double max_product_overlap(const Mat& rho, int restarts, std::uint64_t seed);
double min_product_overlap(const Mat& rho, int restarts, std::uint64_t seed);

struct WitnessGeometry {
    double c0 = 0.0;                     // Tr(rho_S(2/3) (rho_S - rho_S(2/3)))
    double witness_identity_residual = 0.0; // max|24 (c0 I + rho_S(2/3) - rho_S) - W|
    double hs_norm_identity_error = 0.0;    // | ||I_16||_HS - 4 |
};

WitnessGeometry witness_geometry_check();

struct ValueWithError {
    double value = 0.0;
    std::optional<double> sigma;
};

struct AnalysisReport {
    std::optional<ValueWithError> witness_from_state;  // Tr(W rho_hat)
    std::optional<ValueWithError> witness_from_counts; // parity-sum estimator
    std::optional<ValueWithError> min_pt_eig;
    std::string min_pt_cut;
    std::optional<ValueWithError> fidelity_with_target;
    std::optional<ValueWithError> tangle;
};

} // namespace smolin
