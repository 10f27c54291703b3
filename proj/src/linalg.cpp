#include "smolin/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "smolin/errors.hpp"

namespace smolin {

Mat pauli(int mu) {
    Mat m(2, 2);
    switch (mu) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, cx(0, -1), cx(0, 1), 0; break;
        case 3: m << 1, 0, 0, -1; break;
        default: throw validation_error("pauli label out of range: " + std::to_string(mu));
    }
    return m;
}

Mat tensor(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vec tensor(const Vec& a, const Vec& b) {
    Vec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Mat pauli_string(int mu, int n_qubits) {
    Mat out = pauli(mu);
    for (int k = 1; k < n_qubits; ++k) out = tensor(out, pauli(mu));
    return out;
}

int qubit_count(Eigen::Index dim) {
    int n = 0;
    Eigen::Index d = 1;
    while (d < dim) { d <<= 1; ++n; }
    if (d != dim || dim < 2)
        throw validation_error("dimension " + std::to_string(dim) + " is not a power of two");
    return n;
}

namespace {

int bit_of(Eigen::Index idx, int qubit, int n) { return static_cast<int>((idx >> (n - 1 - qubit)) & 1); }

void check_square(const Mat& m) {
    if (m.rows() != m.cols()) throw validation_error("matrix is not square");
}

} // namespace

Mat permute_qubits(const Mat& m, const std::vector<int>& perm) {
    check_square(m);
    const int n = qubit_count(m.rows());
    if (static_cast<int>(perm.size()) != n) throw validation_error("permutation length mismatch");
    std::vector<bool> hit(n, false);
    for (int p : perm) {
        if (p < 0 || p >= n || hit[p]) throw validation_error("permutation is not a bijection");
        hit[p] = true;
    }
    const Eigen::Index dim = m.rows();
    std::vector<Eigen::Index> map(dim, 0);
    for (Eigen::Index x = 0; x < dim; ++x) {
        Eigen::Index y = 0;
        for (int q = 0; q < n; ++q)
            y |= static_cast<Eigen::Index>(bit_of(x, q, n)) << (n - 1 - perm[q]);
        map[x] = y;
    }
    Mat out(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) out(map[r], map[c]) = m(r, c);
    return out;
}

Mat partial_transpose(const Mat& m, const std::vector<int>& qubits) {
    check_square(m);
    const int n = qubit_count(m.rows());
    Eigen::Index mask = 0;
    for (int q : qubits) {
        if (q < 0 || q >= n) throw validation_error("transpose qubit out of range");
        Eigen::Index bit = Eigen::Index(1) << (n - 1 - q);
        if (mask & bit) throw validation_error("duplicate qubit in transpose subset");
        mask |= bit;
    }
    const Eigen::Index dim = m.rows();
    Mat out(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) {
            // swap the subset bits between row and column index
            Eigen::Index rr = (r & ~mask) | (c & mask);
            Eigen::Index cc = (c & ~mask) | (r & mask);
            out(rr, cc) = m(r, c);
        }
    return out;
}

Mat partial_trace(const Mat& m, const std::vector<int>& keep) {
    check_square(m);
    const int n = qubit_count(m.rows());
    std::vector<bool> kept(n, false);
    for (int q : keep) {
        if (q < 0 || q >= n) throw validation_error("kept qubit out of range");
        if (kept[q]) throw validation_error("duplicate qubit in keep subset");
        kept[q] = true;
    }
    std::vector<int> keep_sorted, traced;
    for (int q = 0; q < n; ++q) (kept[q] ? keep_sorted : traced).push_back(q);
    const int nk = static_cast<int>(keep_sorted.size());
    const int nt = n - nk;
    const Eigen::Index dk = Eigen::Index(1) << nk;
    const Eigen::Index dt = Eigen::Index(1) << nt;
    auto assemble = [&](Eigen::Index kept_bits, Eigen::Index traced_bits) {
        Eigen::Index idx = 0;
        for (int i = 0; i < nk; ++i)
            idx |= ((kept_bits >> (nk - 1 - i)) & 1) << (n - 1 - keep_sorted[i]);
        for (int i = 0; i < nt; ++i)
            idx |= ((traced_bits >> (nt - 1 - i)) & 1) << (n - 1 - traced[i]);
        return idx;
    };
    Mat out = Mat::Zero(dk, dk);
    for (Eigen::Index r = 0; r < dk; ++r)
        for (Eigen::Index c = 0; c < dk; ++c)
            for (Eigen::Index t = 0; t < dt; ++t)
                out(r, c) += m(assemble(r, t), assemble(c, t));
    return out;
}

Eigen::VectorXd hermitian_eigenvalues(const Mat& m) {
    check_square(m);
    const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (dev > 1e-10)
        throw numeric_error("operand is not Hermitian (max deviation " + std::to_string(dev) + ")");
    Mat h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw numeric_error("eigensolver failed to converge");
    return solver.eigenvalues();
}

double hs_norm(const Mat& m) { return std::sqrt((m.adjoint() * m).trace().real()); }

Mat psd_sqrt(const Mat& m) {
    check_square(m);
    Mat h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> solver(h);
    if (solver.info() != Eigen::Success) throw numeric_error("eigensolver failed to converge");
    Eigen::VectorXd w = solver.eigenvalues().cwiseMax(0.0);
    return solver.eigenvectors() * w.cwiseSqrt().asDiagonal() * solver.eigenvectors().adjoint();
}

} // namespace smolin
