#pragma once

#include <utility>

#include "smolin/linalg.hpp"
#include "smolin/rng.hpp"

namespace smolin {

// Bell state (sigma_mu x I)|phi+>, phase-fixed so the first nonzero amplitude
// is real positive: mu = 0,1,2,3 -> phi+, psi+, psi-, phi-.
Vec bell_state(int mu);
Mat bell_projector(int mu);

// Four-qubit mixture of identical Bell pairs on (0,1) and (2,3); equals
// (1/16)(I + X^{x4} + Y^{x4} + Z^{x4}).
Mat smolin_state();

// (1-p) * smolin + p * I/16.
Mat noisy_smolin(double p);

// v * |Bell_mu><Bell_mu| + (1-v) * I/4.
Mat werner_state(double v, int mu = 0);

// Correlated/uncorrelated Pauli pair for one twirl event: with probability
// 1-p both labels equal (uniform), otherwise independent uniform labels.
std::pair<int, int> twirl_sample(double p, Rng& rng);

// Conjugation by a product of Paulis on the listed qubits.
Mat apply_local_pauli(const Mat& state, const std::vector<std::pair<int, int>>& assignments);

enum class SourceKind { ideal, werner, colored };

struct SourceModel {
    SourceKind kind = SourceKind::ideal;
    double fidelity = 1.0; // target overlap with |phi+>
    double tangle = 1.0;   // target squared concurrence (colored kind only)
};

// Two-qubit pair-source state hitting the model's targets.
//   ideal:   |phi+><phi+|
//   werner:  v = (4F - 1)/3
//   colored: rotated mix of the Bell projector with a dephased |00>/|11>
//            component; a local y-rotation supplies the second noise axis so
//            tangle above the Werner curve at equal fidelity is reachable.
//            Both targets are reproduced (fidelity to 1e-6, tangle to 1e-3).
Mat imperfect_source(const SourceModel& model);

// Exact twirl average at noise level p of pair sources src1 on qubits (0,1)
// and src2 on (2,3): sum over 16 Pauli label pairs applied to qubits 0 and 2
// with weight (1-p)/4 * delta + p/16.
Mat twirl_mixture(double p, const Mat& src1, const Mat& src2);

} // namespace smolin
