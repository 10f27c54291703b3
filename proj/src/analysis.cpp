#include "smolin/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "smolin/errors.hpp"
#include "smolin/rng.hpp"
#include "smolin/states.hpp"

namespace smolin {

Mat witness_operator() {
    Mat w = Mat::Identity(16, 16);
    for (int i = 1; i <= 3; ++i) w -= pauli_string(i, 4);
    return w;
}

double witness_expectation(const Mat& rho) {
    if (rho.rows() != 16 || rho.cols() != 16)
        throw validation_error("witness expectation needs a four-qubit state");
    return (witness_operator() * rho).trace().real();
}

std::string MinPtResult::cut_label() const {
    std::string left, right;
    std::vector<bool> in(static_cast<std::size_t>(n_qubits), false);
    for (int q : cut) in[static_cast<std::size_t>(q)] = true;
    for (int q = 0; q < n_qubits; ++q) (in[static_cast<std::size_t>(q)] ? left : right) += static_cast<char>('0' + q);
    return left + ":" + right;
}

MinPtResult min_pt_eigenvalue(const Mat& rho) {
    const int n = qubit_count(rho.rows());
    std::vector<std::vector<int>> cuts;
    if (n == 4)
        cuts = {{0, 1}, {0, 2}, {0, 3}};
    else if (n == 2)
        cuts = {{0}};
    else
        throw validation_error("minimum PT eigenvalue defined for two or four qubits");
    MinPtResult best;
    best.n_qubits = n;
    bool first = true;
    for (const auto& cut : cuts) {
        double v = hermitian_eigenvalues(partial_transpose(rho, cut))(0);
        if (first || v < best.value) {
            best.value = v;
            best.cut = cut;
            first = false;
        }
    }
    return best;
}

double fidelity(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw validation_error("fidelity operands differ in dimension");
    for (const Mat* m : {&rho, &sigma}) {
        Eigen::VectorXd ev = hermitian_eigenvalues(*m);
        if (ev(0) < -1e-8) throw numeric_error("fidelity operand is not positive semidefinite");
    }
    Mat root = psd_sqrt(rho);
    Eigen::VectorXd ev = hermitian_eigenvalues(root * sigma * root).cwiseMax(0.0);
    double s = ev.cwiseSqrt().sum();
    return s * s;
}

double tangle(const Mat& rho) {
    if (rho.rows() != 4 || rho.cols() != 4) throw validation_error("tangle needs a two-qubit state");
    Mat yy = tensor(pauli(2), pauli(2));
    Mat rho_tilde = yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<Mat> solver(rho * rho_tilde);
    if (solver.info() != Eigen::Success) throw numeric_error("eigensolver failed on rho rho~");
    Eigen::VectorXd lambda = solver.eigenvalues().real().cwiseMax(0.0).cwiseSqrt();
    std::sort(lambda.data(), lambda.data() + lambda.size(), std::greater<double>());
    double c = std::max(0.0, lambda(0) - lambda(1) - lambda(2) - lambda(3));
    return c * c;
}

namespace {

Vec haar_vector(Eigen::Index dim, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = cx(gauss(rng), gauss(rng));
    return v / v.norm();
}

// One seesaw run across the (qubit 0):(rest) split; `top` picks ascent or descent.
double seesaw_run(const Mat& rho, bool top, Rng& rng) {
    const Eigen::Index db = rho.rows() / 2;
    Vec a = haar_vector(2, rng);
    Vec b = haar_vector(db, rng);
    auto contract_a = [&](const Vec& bb) {
        Mat m(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                m(i, j) = (bb.adjoint() * rho.block(i * db, j * db, db, db) * bb)(0);
        return m;
    };
    auto contract_b = [&](const Vec& aa) {
        Mat m = Mat::Zero(db, db);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                m += std::conj(aa(i)) * aa(j) * rho.block(i * db, j * db, db, db);
        return m;
    };
    auto extremal = [&](const Mat& m) {
        Eigen::SelfAdjointEigenSolver<Mat> solver((m + m.adjoint()) / 2.0);
        Eigen::Index col = top ? m.rows() - 1 : 0;
        return Vec(solver.eigenvectors().col(col));
    };
    double obj = 0.0, prev = top ? -1.0 : 2.0;
    for (int sweep = 0; sweep < 500; ++sweep) {
        a = extremal(contract_a(b));
        Mat mb = contract_b(a);
        b = extremal(mb);
        obj = (b.adjoint() * mb * b)(0).real();
        if (std::abs(obj - prev) < 1e-10) break;
        prev = obj;
    }
    return obj;
}

double product_overlap_extremum(const Mat& rho, int restarts, std::uint64_t seed, bool top) {
    if (rho.rows() != 16 || rho.cols() != 16)
        throw validation_error("product-overlap seesaw needs a four-qubit state");
    if (restarts < 1) throw validation_error("seesaw needs at least one restart");
    double best = top ? -1.0 : 2.0;
    for (int r = 0; r < restarts; ++r) {
        Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        double v = seesaw_run(rho, top, rng);
        best = top ? std::max(best, v) : std::min(best, v);
    }
    return best;
}

} // namespace

double max_product_overlap(const Mat& rho, int restarts, std::uint64_t seed) {
    return product_overlap_extremum(rho, restarts, seed, true);
}

double min_product_overlap(const Mat& rho, int restarts, std::uint64_t seed) {
    return product_overlap_extremum(rho, restarts, seed, false);
}

WitnessGeometry witness_geometry_check() {
    Mat rs = smolin_state();
    Mat rb = noisy_smolin(2.0 / 3.0); // separable boundary member of the family
    WitnessGeometry out;
    out.c0 = (rb * (rs - rb)).trace().real();
    Mat w_tilde = out.c0 * Mat::Identity(16, 16) + rb - rs;
    out.witness_identity_residual = (24.0 * w_tilde - witness_operator()).cwiseAbs().maxCoeff();
    out.hs_norm_identity_error = std::abs(hs_norm(Mat::Identity(16, 16)) - 4.0);
    return out;
}

} // namespace smolin
