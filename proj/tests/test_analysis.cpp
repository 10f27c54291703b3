#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "smolin/analysis.hpp"
#include "smolin/errors.hpp"
#include "smolin/states.hpp"
#include "oracles.hpp"

using namespace smolin;
using oracles::max_abs_diff;

TEST_CASE("witness expectation is linear in the mixing parameter") {
    const Mat w = witness_operator();
    CHECK(max_abs_diff(w, w.adjoint()) < 1e-15);
    for (int k = 0; k <= 10; ++k) {
        const double p = k / 10.0;
        CHECK(std::abs(witness_expectation(noisy_smolin(p)) - (3.0 * p - 2.0)) < 1e-12);
    }
    CHECK_THROWS_AS(witness_expectation(Mat::Identity(4, 4) / 4.0), validation_error);
}

TEST_CASE("witness is nonnegative on product states") {
    Rng rng = make_rng(31);
    const Mat w = witness_operator();
    double min_seen = 1e9;
    for (int i = 0; i < 10000; ++i) {
        const Vec psi = oracles::random_product_state(4, rng);
        const double val = (psi.adjoint() * w * psi)(0).real();
        min_seen = std::min(min_seen, val);
        CHECK(val > -1e-9);
    }
    // Haar-random products approach the tight bound from above; the exact
    // minimizers are stabilizer-aligned and measure zero
    CHECK(min_seen < 0.5);
    const Vec aligned = tensor(Vec(Vec::Unit(2, 0)), tensor(Vec(Vec::Unit(2, 0)),
                              tensor(Vec(Vec::Unit(2, 0)), Vec(Vec::Unit(2, 0)))));
    CHECK(std::abs((aligned.adjoint() * w * aligned)(0).real()) < 1e-12);
}

TEST_CASE("minimum PT eigenvalue across the pair cuts") {
    for (int k = 0; k <= 10; ++k) {
        const double p = k / 10.0;
        const MinPtResult r = min_pt_eigenvalue(noisy_smolin(p));
        CHECK(std::abs(r.value - p / 16.0) < 1e-12);
        CHECK(r.n_qubits == 4);
        CHECK(r.cut.size() == 2);
        CHECK(r.cut[0] == 0);
    }
    CHECK(min_pt_eigenvalue(noisy_smolin(0.49)).cut_label() == "01:23");

    // every pair cut individually gives p/16: the family is cut-symmetric
    const Mat rho = noisy_smolin(0.5);
    for (const auto& cut : {std::vector<int>{0, 1}, {0, 2}, {0, 3}}) {
        const double v = hermitian_eigenvalues(partial_transpose(rho, cut))(0);
        CHECK(std::abs(v - 0.5 / 16.0) < 1e-12);
    }

    for (double v : {0.2, 0.51, 1.0}) {
        const MinPtResult r = min_pt_eigenvalue(werner_state(v));
        CHECK(std::abs(r.value - (1.0 - 3.0 * v) / 4.0) < 1e-12);
        CHECK(r.cut_label() == "0:1");
    }

    CHECK_THROWS_AS(min_pt_eigenvalue(Mat::Identity(8, 8) / 8.0), validation_error);
}

TEST_CASE("partial transpose of the Bell-pair mixture is a reflected copy") {
    // transposing one qubit maps the state onto a Pauli-conjugated reflection
    // of itself through the maximally mixed point
    const Mat rho = smolin_state();
    const Mat lhs = partial_transpose(rho, {0});
    const Mat conj = tensor(pauli(2), Mat::Identity(8, 8));
    const Mat rhs = conj * (Mat::Identity(16, 16) / 8.0 - rho) * conj;
    CHECK(max_abs_diff(lhs, rhs) < 1e-14);
}

TEST_CASE("fidelity special values") {
    Rng rng = make_rng(32);
    const Vec a = oracles::random_pure(4, rng);
    const Vec b = oracles::random_pure(4, rng);
    const Mat pa = a * a.adjoint();
    const Mat pb = b * b.adjoint();
    // rank-1 inputs sit at the sqrt branch point, which caps the route at ~1e-8
    const double want = std::norm((a.adjoint() * b)(0));
    CHECK(std::abs(fidelity(pa, pb) - want) < 1e-7);
    CHECK(std::abs(fidelity(pa, pa) - 1.0) < 1e-7);

    const Mat rho = oracles::random_density(4, rng);
    CHECK(std::abs(fidelity(rho, rho) - 1.0) < 1e-9);
    CHECK(std::abs(fidelity(rho, Mat::Identity(4, 4) / 4.0) -
                   fidelity(Mat::Identity(4, 4) / 4.0, rho)) < 1e-9);

    CHECK(std::abs(fidelity(smolin_state(), Mat::Identity(16, 16) / 16.0) - 0.25) < 1e-10);
    CHECK(std::abs(fidelity(smolin_state(), noisy_smolin(2.0 / 3.0)) - 0.5) < 1e-7);

    CHECK_THROWS_AS(fidelity(pa, Mat::Identity(8, 8) / 8.0), validation_error);
}

TEST_CASE("tangle agrees with the Hermitian-route concurrence oracle") {
    CHECK(std::abs(tangle(bell_projector(0)) - 1.0) < 1e-12);
    CHECK(std::abs(tangle(bell_projector(2)) - 1.0) < 1e-12);

    Mat sep = Mat::Zero(4, 4);
    sep(0, 0) = 1.0; // |00><00|
    CHECK(tangle(sep) == 0.0);

    CHECK(std::abs(tangle(werner_state(0.51)) - 0.070225) < 1e-12);
    CHECK(tangle(werner_state(1.0 / 3.0)) == 0.0);
    CHECK(tangle(werner_state(0.2)) == 0.0);

    // both routes take square roots of spectra with near-zero tails, so the
    // cross-check floor sits around 1e-8
    Rng rng = make_rng(33);
    for (int i = 0; i < 1000; ++i) {
        const Mat rho = oracles::random_density(4, rng, 1 + i % 4);
        const double c = oracles::concurrence_hermitian(rho);
        CHECK(std::abs(tangle(rho) - c * c) <= 1e-7);
    }

    CHECK_THROWS_AS(tangle(smolin_state()), validation_error);
}

TEST_CASE("product-overlap seesaw brackets the known extrema") {
    const Mat rho = smolin_state();
    const double hi = max_product_overlap(rho, 12, 2026);
    CHECK(hi > 0.125 - 1e-6);
    CHECK(hi < 0.125 + 1e-9);
    const double lo = min_product_overlap(rho, 12, 2026);
    CHECK(lo >= -1e-12); // exact zero up to round-off: kernel products exist
    CHECK(lo <= 1e-8);

    CHECK_THROWS_AS(max_product_overlap(werner_state(0.5), 4, 1), validation_error);
    CHECK_THROWS_AS(max_product_overlap(rho, 0, 1), validation_error);
}

TEST_CASE("witness geometry identities") {
    const WitnessGeometry g = witness_geometry_check();
    CHECK(std::abs(g.c0 - 1.0 / 24.0) < 1e-15);
    CHECK(g.witness_identity_residual < 1e-12);
    CHECK(g.hs_norm_identity_error < 1e-13);
}
