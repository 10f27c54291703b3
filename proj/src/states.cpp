#include "smolin/states.hpp"

#include <cmath>

#include "smolin/errors.hpp"

namespace smolin {

Vec bell_state(int mu) {
    Vec phi_plus(4);
    phi_plus << 1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0);
    Vec v = tensor(pauli(mu), Mat::Identity(2, 2)) * phi_plus;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (std::abs(v(k)) > 1e-12) {
            v *= std::conj(v(k)) / std::abs(v(k)); // first nonzero amplitude real positive
            break;
        }
    }
    return v;
}

Mat bell_projector(int mu) {
    Vec v = bell_state(mu);
    return v * v.adjoint();
}

Mat smolin_state() {
    Mat rho = Mat::Zero(16, 16);
    for (int mu = 0; mu < 4; ++mu) {
        Mat pair = bell_projector(mu);
        rho += tensor(pair, pair);
    }
    return rho / 4.0;
}

Mat noisy_smolin(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw validation_error("noise level p must lie in [0,1]");
    return (1.0 - p) * smolin_state() + p * Mat::Identity(16, 16) / 16.0;
}

Mat werner_state(double v, int mu) {
    if (!(v >= 0.0 && v <= 1.0)) throw validation_error("Werner weight must lie in [0,1]");
    return v * bell_projector(mu) + (1.0 - v) * Mat::Identity(4, 4) / 4.0;
}

std::pair<int, int> twirl_sample(double p, Rng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw validation_error("noise level p must lie in [0,1]");
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> label(0, 3);
    if (coin(rng) < 1.0 - p) {
        int mu = label(rng);
        return {mu, mu};
    }
    int mu1 = label(rng);
    int mu2 = label(rng);
    return {mu1, mu2};
}

Mat apply_local_pauli(const Mat& state, const std::vector<std::pair<int, int>>& assignments) {
    const int n = qubit_count(state.rows());
    std::vector<int> labels(n, 0);
    std::vector<bool> seen(n, false);
    for (auto [qubit, mu] : assignments) {
        if (qubit < 0 || qubit >= n) throw validation_error("pauli assignment qubit out of range");
        if (seen[qubit]) throw validation_error("duplicate qubit in pauli assignments");
        if (mu < 0 || mu > 3) throw validation_error("pauli label out of range");
        seen[qubit] = true;
        labels[qubit] = mu;
    }
    Mat op = pauli(labels[0]);
    for (int q = 1; q < n; ++q) op = tensor(op, pauli(labels[q]));
    return op * state * op.adjoint();
}

Mat imperfect_source(const SourceModel& model) {
    const double F = model.fidelity;
    const double T = model.tangle;
    if (!(F >= 0.0 && F <= 1.0)) throw validation_error("source fidelity target out of [0,1]");
    if (!(T >= 0.0 && T <= 1.0)) throw validation_error("source tangle target out of [0,1]");

    switch (model.kind) {
        case SourceKind::ideal:
            return bell_projector(0);
        case SourceKind::werner: {
            double v = (4.0 * F - 1.0) / 3.0;
            if (!(v >= 0.0 && v <= 1.0))
                throw validation_error("werner source: fidelity target outside reachable range");
            return werner_state(v);
        }
        case SourceKind::colored: {
            // rho = U (a |phi+><phi+| + (1-a) D) U^dag with D the dephased
            // |00>/|11> mix and U = Ry(theta) on qubit 0. Concurrence is a
            // (rotation invariant), fidelity is ((1+a)/2) cos^2(theta/2).
            const double a = std::sqrt(T);
            const double cos2 = 2.0 * F / (1.0 + a);
            if (cos2 > 1.0 + 1e-12)
                throw validation_error("colored source: (fidelity, tangle) pair infeasible for the family");
            const double theta = 2.0 * std::acos(std::sqrt(std::min(cos2, 1.0)));
            Mat dephased = Mat::Zero(4, 4);
            dephased(0, 0) = 0.5;
            dephased(3, 3) = 0.5;
            Mat sigma = a * bell_projector(0) + (1.0 - a) * dephased;
            Mat ry(2, 2);
            ry << std::cos(theta / 2.0), -std::sin(theta / 2.0),
                  std::sin(theta / 2.0),  std::cos(theta / 2.0);
            Mat u = tensor(ry, Mat::Identity(2, 2));
            Mat rho = u * sigma * u.adjoint();

            const double got_f = (bell_state(0).adjoint() * rho * bell_state(0))(0).real();
            const double got_c = a;
            if (std::abs(got_f - F) > 1e-6 || std::abs(got_c * got_c - T) > 1e-3)
                throw numeric_error("colored source fit failed to reach its targets");
            return rho;
        }
    }
    throw validation_error("unknown source kind");
}

Mat twirl_mixture(double p, const Mat& src1, const Mat& src2) {
    if (!(p >= 0.0 && p <= 1.0)) throw validation_error("noise level p must lie in [0,1]");
    if (src1.rows() != 4 || src1.cols() != 4 || src2.rows() != 4 || src2.cols() != 4)
        throw validation_error("twirl_mixture expects two-qubit sources");
    Mat base = tensor(src1, src2);
    Mat out = Mat::Zero(16, 16);
    for (int mu1 = 0; mu1 < 4; ++mu1)
        for (int mu2 = 0; mu2 < 4; ++mu2) {
            double w = (mu1 == mu2 ? (1.0 - p) / 4.0 : 0.0) + p / 16.0;
            out += w * apply_local_pauli(base, {{0, mu1}, {2, mu2}});
        }
    return out;
}

} // namespace smolin
