#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smolin/linalg.hpp"
#include "smolin/rng.hpp"

namespace smolin {

// Polarization analyzer labels: H,V (z pair), P,M (x pair, "+"/"-"), R,L (y
// pair). H, P, R carry parity +1 and name their basis pair.
Vec analyzer_state(char label);
Mat analyzer_projector(char label);
char basis_rep(char label);        // H,V -> H   P,M -> P   R,L -> R
char complement_label(char label); // H <-> V, P <-> M, R <-> L
int label_parity(char label);      // +1 for H,P,R; -1 for V,M,L

struct Outcome {
    std::string label;
    Vec state;
};

// The 2^n product-basis outcomes of a setting string, qubit 0 as the most
// significant bit (bit 0 meaning the basis-pair representative).
std::vector<Outcome> setting_outcomes(const std::string& setting);

// Counts for one product basis across all of its outcomes.
struct CountBlock {
    std::string basis;          // canonical representative chars, e.g. "HPRH"
    std::vector<double> counts; // 2^n entries in setting_outcomes order
    std::string outcome_label(int index) const;
    double total() const;
};

struct CountSet {
    int n_qubits = 0;
    std::vector<CountBlock> blocks; // sorted by basis string
    const CountBlock* find(const std::string& basis) const;
    double total() const;
};

std::vector<std::string> all_bases(int n_qubits); // 3^n canonical bases
std::vector<std::string> witness_bases();         // HHHH, PPPP, RRRR

// Independent Poisson draw per outcome with mean
// mean_total_per_setting * Tr(rho Pi); bit-identical under a fixed rng state.
CountSet simulate_counts(const Mat& rho, const std::vector<std::string>& bases,
                         double mean_total_per_setting, Rng& rng);

// Noise-free expected counts (means themselves, not sampled).
CountSet expected_counts(const Mat& rho, const std::vector<std::string>& bases,
                         double mean_total_per_setting);

struct Estimate {
    double value = 0.0;
    double sigma = 0.0;
};

// Parity-weighted <sigma^{xn}> estimate for the block's basis with the
// Poisson-propagated standard error.
Estimate pauli_expectation_from_counts(const CountBlock& block);

// 1 - (z + x + y parity estimates); errors combined in quadrature.
Estimate witness_from_counts(const CountBlock& z, const CountBlock& x, const CountBlock& y);
Estimate witness_from_counts(const CountSet& set);

struct ReconstructionConfig {
    int max_iterations = 1000;
    double stop_delta = 1e-10; // on log-likelihood change
    double probability_floor = 1e-12;
};

struct MleResult {
    Mat rho;
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> ll_trace; // accepted-step log-likelihoods
};

// Iterative maximum likelihood: rho <- N[R rho R] from rho_0 = I/dim, with R
// built from per-block frequencies weighted by block totals; a diluted step
// (I + eps R) with eps halving guards the rare likelihood decrease. Rejects
// rank-deficient (non informationally complete) measurement sets.
MleResult mle_reconstruct(const CountSet& set, const ReconstructionConfig& cfg = {});

// Independent cross-check optimizer: rho = T^dag T / Tr(T^dag T) with lower
// triangular T, finite-difference likelihood ascent with backtracking line
// search. Two-qubit scale only; `budget` caps ascent steps.
Mat independent_mle_oracle(const CountSet& set, int budget = 5000);

enum class McStatistic { witness, min_pt_eig, fidelity_with, tangle };

McStatistic mc_statistic_from_name(const std::string& name);

struct McConfig {
    int iterations = 500;
    std::uint64_t seed = 0;
};

struct McResult {
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> samples;   // iteration-index order
    std::vector<double> bin_edges; // Freedman-Diaconis binning
    std::vector<long> bin_counts;
};

// Poisson-resamples every count, reruns the downstream pipeline per iteration
// (direct parity sums for `witness`, reconstruction for the others), and
// reduces in iteration-index order: fixed seeds give identical results
// regardless of how iterations are scheduled across threads.
McResult monte_carlo_errors(const CountSet& set, McStatistic stat, const McConfig& cfg,
                            const Mat* fidelity_target = nullptr);

// Sum of two same-basis blocks taken with swapped transmitted/reflected port
// roles; block b's outcomes are relabeled through the swap before summing.
CountBlock combine_complementary(const CountBlock& a, const CountBlock& b);

} // namespace smolin
