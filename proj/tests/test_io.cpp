#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <string>

#include <json.hpp>

#include "smolin/errors.hpp"
#include "smolin/io.hpp"
#include "smolin/states.hpp"
#include "smolin/tomography.hpp"
#include "oracles.hpp"

using namespace smolin;
using oracles::max_abs_diff;

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << text;
}

} // namespace

TEST_CASE("density JSON round trip") {
    Rng rng = make_rng(61);
    for (int n : {2, 4}) {
        const Mat rho = oracles::random_density(1 << n, rng);
        const std::string path = "tmp_io_density_" + std::to_string(n) + ".json";
        save_density_json(rho, path);
        const Mat back = load_density_json(path);
        CHECK(max_abs_diff(rho, back) < 1e-14);
        CHECK(back.rows() == (1 << n));
    }
    save_density_json(noisy_smolin(0.49), "tmp_io_density_smolin.json");
    const Mat back = load_density_json("tmp_io_density_smolin.json");
    CHECK(max_abs_diff(back, noisy_smolin(0.49)) < 1e-14);
}

TEST_CASE("density JSON validation") {
    CHECK_THROWS_AS(load_density_json("does_not_exist.json"), validation_error);

    write_file("tmp_io_bad1.json", "{\"re\": [[1]], \"im\": [[0]]}");
    CHECK_THROWS_AS(load_density_json("tmp_io_bad1.json"), validation_error);

    write_file("tmp_io_bad2.json", "{\"n_qubits\": 0, \"re\": [], \"im\": []}");
    CHECK_THROWS_AS(load_density_json("tmp_io_bad2.json"), validation_error);

    write_file("tmp_io_bad3.json",
               "{\"n_qubits\": 1, \"re\": [[0.5, 0], [0, 0.5], [0, 0]], \"im\": [[0,0],[0,0]]}");
    CHECK_THROWS_AS(load_density_json("tmp_io_bad3.json"), validation_error);

    // non-Hermitian
    write_file("tmp_io_bad4.json",
               "{\"n_qubits\": 1, \"re\": [[0.5, 1], [0, 0.5]], \"im\": [[0,0],[0,0]]}");
    CHECK_THROWS_AS(load_density_json("tmp_io_bad4.json"), validation_error);

    // trace 2
    write_file("tmp_io_bad5.json",
               "{\"n_qubits\": 1, \"re\": [[1, 0], [0, 1]], \"im\": [[0,0],[0,0]]}");
    CHECK_THROWS_AS(load_density_json("tmp_io_bad5.json"), validation_error);

    write_file("tmp_io_bad6.json", "this is not json");
    CHECK_THROWS_AS(load_density_json("tmp_io_bad6.json"), validation_error);
}

TEST_CASE("counts CSV round trip preserves every block") {
    Rng rng = make_rng(62);
    const CountSet set = simulate_counts(werner_state(0.51), all_bases(2), 4000, rng);
    save_counts_csv(set, "tmp_io_counts.csv");
    const CountSet back = load_counts_csv("tmp_io_counts.csv");
    REQUIRE(back.blocks.size() == set.blocks.size());
    CHECK(back.n_qubits == set.n_qubits);
    for (std::size_t i = 0; i < set.blocks.size(); ++i) {
        CHECK(back.blocks[i].basis == set.blocks[i].basis);
        CHECK(back.blocks[i].counts == set.blocks[i].counts);
    }
}

TEST_CASE("counts JSON round trip and extension dispatch") {
    Rng rng = make_rng(63);
    const CountSet set = simulate_counts(noisy_smolin(0.49), witness_bases(), 45000, rng);
    save_counts_json(set, "tmp_io_counts.json");
    const CountSet back = load_counts("tmp_io_counts.json");
    REQUIRE(back.blocks.size() == 3);
    CHECK(back.n_qubits == 4);
    for (std::size_t i = 0; i < set.blocks.size(); ++i)
        CHECK(back.blocks[i].counts == set.blocks[i].counts);

    save_counts_csv(set, "tmp_io_counts2.csv");
    const CountSet csv_back = load_counts("tmp_io_counts2.csv");
    for (std::size_t i = 0; i < set.blocks.size(); ++i)
        CHECK(csv_back.blocks[i].counts == set.blocks[i].counts);
}

TEST_CASE("count rows merge into canonical blocks") {
    // single-projector rows under non-canonical settings land in one block
    write_file("tmp_io_merge.csv",
               "setting,outcome,count\n"
               "HV,HV,5\n"
               "HH,HV,3\n"
               "VH,VH,2\n"
               "VV,VV,7\n"
               "HH,HH,1\n");
    const CountSet set = load_counts_csv("tmp_io_merge.csv");
    REQUIRE(set.blocks.size() == 1);
    CHECK(set.blocks[0].basis == "HH");
    CHECK(set.blocks[0].counts == std::vector<double>{1, 8, 2, 7});
}

TEST_CASE("counts CSV validation") {
    write_file("tmp_io_hdr.csv", "a,b,c\nHH,HH,1\n");
    CHECK_THROWS_AS(load_counts_csv("tmp_io_hdr.csv"), validation_error);

    write_file("tmp_io_row.csv", "setting,outcome,count\nHH;HH;1\n");
    CHECK_THROWS_AS(load_counts_csv("tmp_io_row.csv"), validation_error);

    write_file("tmp_io_cnt.csv", "setting,outcome,count\nHH,HH,abc\n");
    CHECK_THROWS_AS(load_counts_csv("tmp_io_cnt.csv"), validation_error);

    write_file("tmp_io_neg.csv", "setting,outcome,count\nHH,HH,-4\n");
    CHECK_THROWS_AS(load_counts_csv("tmp_io_neg.csv"), validation_error);

    // outcome outside the setting's basis
    write_file("tmp_io_mix.csv", "setting,outcome,count\nHH,HP,3\n");
    CHECK_THROWS_AS(load_counts_csv("tmp_io_mix.csv"), validation_error);

    write_file("tmp_io_len.csv", "setting,outcome,count\nHH,HH,1\nHHH,HHH,1\n");
    CHECK_THROWS_AS(load_counts_csv("tmp_io_len.csv"), validation_error);

    write_file("tmp_io_empty.csv", "setting,outcome,count\n");
    CHECK_THROWS_AS(load_counts_csv("tmp_io_empty.csv"), validation_error);

    // CRLF and padding are tolerated
    write_file("tmp_io_crlf.csv", "setting,outcome,count\r\nHH,HH,4\r\nHV,HV,6\r\n");
    const CountSet ok = load_counts_csv("tmp_io_crlf.csv");
    CHECK(ok.blocks[0].counts == std::vector<double>{4, 6, 0, 0});
}

TEST_CASE("counts JSON validation") {
    write_file("tmp_io_norows.json", "{\"n_qubits\": 2}");
    CHECK_THROWS_AS(load_counts_json("tmp_io_norows.json"), validation_error);

    write_file("tmp_io_badrow.json", "{\"rows\": [{\"setting\": \"HH\", \"count\": 1}]}");
    CHECK_THROWS_AS(load_counts_json("tmp_io_badrow.json"), validation_error);
}

TEST_CASE("analysis report serialization") {
    AnalysisReport rep;
    rep.witness_from_counts = ValueWithError{-0.159, 0.0075};
    rep.min_pt_eig = ValueWithError{-0.016, std::nullopt};
    rep.min_pt_cut = "0:1";
    const std::string text = report_to_json(rep);
    const auto j = nlohmann::json::parse(text);
    CHECK(j["witness_from_counts"]["value"].get<double>() == doctest::Approx(-0.159));
    CHECK(j["witness_from_counts"]["sigma"].get<double>() == doctest::Approx(0.0075));
    CHECK(j["min_pt_eig"]["sigma"].is_null());
    CHECK(j["min_pt_cut"].get<std::string>() == "0:1");
    CHECK(j["witness_from_state"].is_null());
    CHECK(j["fidelity_with_target"].is_null());
    CHECK(j["tangle"].is_null());
}
