#pragma once

#include <array>
#include <utility>

#include "smolin/linalg.hpp"
#include "smolin/rng.hpp"
#include "smolin/states.hpp"
#include "smolin/tomography.hpp"

namespace smolin {

struct BellProjectionSpec {
    std::array<int, 2> parties{0, 2}; // qubits brought together for the joint measurement
    int mu = 3;                       // Bell outcome projected on
    double visibility = 1.0;          // two-photon interference quality
    double chi = 0.0;                 // residual phase diag(1, e^{i chi}) on parties[0]
};

struct BellProjectResult {
    Mat state;          // post-measurement state of the two remaining qubits
    double probability; // Tr of the measurement element on the input
};

// Projects the chosen pair onto the Bell state. Visibility V mixes the
// coherent projection with incoherent same-port heralds: the measurement
// element is V |Bell_mu><Bell_mu| + (1-V)/2 (P_aa + P_bb) with aa/bb the two
// product states the Bell state superposes; the post-measurement state is the
// matching mixture of projected branches, normalized. Remaining qubits keep
// their relative order.
BellProjectResult bell_project(const Mat& rho, const BellProjectionSpec& spec);

// Builds the twirled four-qubit state from two pair sources at noise level p,
// applies the Bell projection, and simulates the full two-qubit tomography
// (3^2 product bases, Poisson counts) on the remaining parties.
CountSet simulate_unlocking_run(double p, const SourceModel& source1, const SourceModel& source2,
                                const BellProjectionSpec& spec, double mean_total_per_setting,
                                Rng& rng);

} // namespace smolin
