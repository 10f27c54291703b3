#include "smolin/unlocking.hpp"

#include <cmath>

#include "smolin/errors.hpp"

namespace smolin {

BellProjectResult bell_project(const Mat& rho, const BellProjectionSpec& spec) {
    if (rho.rows() != 16 || rho.cols() != 16)
        throw validation_error("Bell projection needs a four-qubit state");
    const auto [qa, qb] = spec.parties;
    if (qa < 0 || qa > 3 || qb < 0 || qb > 3 || qa == qb)
        throw validation_error("Bell projection parties must be two distinct qubits");
    if (!(spec.visibility >= 0.0 && spec.visibility <= 1.0))
        throw validation_error("visibility must lie in [0,1]");
    if (spec.mu < 0 || spec.mu > 3) throw validation_error("Bell label out of range");

    // move the measured pair to the front, keeping the spectators' order
    std::vector<int> perm(4, -1);
    perm[std::size_t(qa)] = 0;
    perm[std::size_t(qb)] = 1;
    int slot = 2;
    for (int q = 0; q < 4; ++q)
        if (perm[std::size_t(q)] < 0) perm[std::size_t(q)] = slot++;
    Mat moved = permute_qubits(rho, perm);

    Mat phase(2, 2);
    phase << 1, 0, 0, std::polar(1.0, spec.chi);
    Mat phase_pair = tensor(phase, Mat::Identity(2, 2));
    Vec bell = phase_pair.adjoint() * bell_state(spec.mu); // phase applied before projection

    // incoherent same-port branch: the two product states the Bell state superposes
    const bool psi_type = (spec.mu == 1 || spec.mu == 2);
    Vec aa = Vec::Zero(4), bb = Vec::Zero(4);
    aa(psi_type ? 1 : 0) = 1.0;
    bb(psi_type ? 2 : 3) = 1.0;

    const double v = spec.visibility;
    const Mat id4 = Mat::Identity(4, 4);
    struct Branch { Vec vec; double weight; };
    const std::vector<Branch> branches = {
        {bell, v}, {aa, (1.0 - v) / 2.0}, {bb, (1.0 - v) / 2.0}};

    Mat post = Mat::Zero(16, 16);
    double prob = 0.0;
    for (const auto& br : branches) {
        if (br.weight <= 0.0) continue;
        Mat k = tensor(Mat(br.vec * br.vec.adjoint()), id4);
        Mat term = k * moved * k;
        post += br.weight * term;
        prob += br.weight * term.trace().real();
    }
    if (prob < 1e-14) throw numeric_error("projection onto a null outcome");

    BellProjectResult out;
    out.probability = prob;
    out.state = partial_trace(post, {2, 3}) / prob;
    return out;
}

CountSet simulate_unlocking_run(double p, const SourceModel& source1, const SourceModel& source2,
                                const BellProjectionSpec& spec, double mean_total_per_setting,
                                Rng& rng) {
    Mat rho4 = twirl_mixture(p, imperfect_source(source1), imperfect_source(source2));
    BellProjectResult projected = bell_project(rho4, spec);
    return simulate_counts(projected.state, all_bases(2), mean_total_per_setting, rng);
}

} // namespace smolin
