// Command-line front end around the library: state generation, count
// simulation, analysis/reconstruction, Bell-projection unlocking runs,
// Monte-Carlo error bars, and a reproduce harness that rebuilds the reference
// artifacts from theory, simulation, and the bundled count tables.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smolin/analysis.hpp"
#include "smolin/errors.hpp"
#include "smolin/io.hpp"
#include "smolin/states.hpp"
#include "smolin/tomography.hpp"
#include "smolin/unlocking.hpp"

using namespace smolin;
using nlohmann::json;

namespace {

struct Options {
    double p = 0.49;
    bool p_given = false;
    std::uint64_t seed = 12345;
    double counts_per_setting = 37700.0;
    std::string counts_path;
    std::string source_model_path;
    std::string format = "csv";
    std::string out;
    std::string stat = "witness";
    int mc_iterations = 100;
    bool witness_only = false;
    double visibility = 1.0;
    double chi = 0.0;
    int bell_mu = 3;
    std::string state_path;
};

std::pair<SourceModel, SourceModel> load_sources(const std::string& path) {
    if (path.empty()) return {SourceModel{}, SourceModel{}};
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open source model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw validation_error("malformed source model JSON: " + std::string(e.what()));
    }
    auto parse_one = [&](const json& node) {
        SourceModel m;
        const std::string kind = node.value("kind", "ideal");
        if (kind == "ideal")
            m.kind = SourceKind::ideal;
        else if (kind == "werner")
            m.kind = SourceKind::werner;
        else if (kind == "colored")
            m.kind = SourceKind::colored;
        else
            throw validation_error("unknown source kind '" + kind + "'");
        m.fidelity = node.value("fidelity", 1.0);
        m.tangle = node.value("tangle", 1.0);
        return m;
    };
    if (j.contains("source_1") && j.contains("source_2"))
        return {parse_one(j["source_1"]), parse_one(j["source_2"])};
    return {parse_one(j), parse_one(j)};
}

std::string counts_file_name(const std::string& stem, const std::string& format) {
    return stem + (format == "json" ? ".json" : ".csv");
}

void save_counts(const CountSet& set, const std::string& path, const std::string& format) {
    if (format == "json")
        save_counts_json(set, path);
    else
        save_counts_csv(set, path);
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw validation_error("cannot create output directory: " + dir);
}

void print_report(const AnalysisReport& rep, const std::string& format) {
    if (format == "json") {
        std::fputs(report_to_json(rep).c_str(), stdout);
        return;
    }
    auto line = [](const char* name, const std::optional<ValueWithError>& v,
                   const std::string& extra = "") {
        if (!v) return;
        if (v->sigma)
            std::printf("%s: %.6f +- %.6f%s\n", name, v->value, *v->sigma, extra.c_str());
        else
            std::printf("%s: %.6f%s\n", name, v->value, extra.c_str());
    };
    line("witness (state)", rep.witness_from_state);
    line("witness (counts)", rep.witness_from_counts);
    line("min PT eigenvalue", rep.min_pt_eig,
         rep.min_pt_cut.empty() ? "" : " (cut " + rep.min_pt_cut + ")");
    line("fidelity with target", rep.fidelity_with_target);
    line("tangle", rep.tangle);
}

void write_report(const AnalysisReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open report file: " + path);
    out << report_to_json(rep);
}

Mat target_for(const CountSet& set, double p, int bell_mu) {
    // four-qubit data compares against the twirled family member, heralded
    // two-qubit data against the matching Werner pair
    if (set.n_qubits == 4) return noisy_smolin(p);
    return werner_state(1.0 - p, bell_mu);
}

int cmd_state(const Options& opt) {
    Mat rho;
    if (opt.source_model_path.empty()) {
        rho = noisy_smolin(opt.p);
    } else {
        auto [s1, s2] = load_sources(opt.source_model_path);
        rho = twirl_mixture(opt.p, imperfect_source(s1), imperfect_source(s2));
    }
    const std::string path = opt.out.empty() ? "state.json" : opt.out;
    save_density_json(rho, path);

    AnalysisReport rep;
    rep.witness_from_state = ValueWithError{witness_expectation(rho), std::nullopt};
    const MinPtResult mpt = min_pt_eigenvalue(rho);
    rep.min_pt_eig = ValueWithError{mpt.value, std::nullopt};
    rep.min_pt_cut = mpt.cut_label();
    print_report(rep, opt.format);
    std::fprintf(stderr, "state written to %s\n", path.c_str());
    return 0;
}

AnalysisReport analyze_counts(const CountSet& set, const Options& opt) {
    AnalysisReport rep;
    if (set.n_qubits == 4) {
        if (set.find("HHHH") && set.find("PPPP") && set.find("RRRR")) {
            const Estimate w = witness_from_counts(set);
            rep.witness_from_counts = ValueWithError{w.value, w.sigma};
        }
        if (set.blocks.size() == 81) { // full tomography: reconstruct as well
            const MleResult r = mle_reconstruct(set);
            rep.witness_from_state = ValueWithError{witness_expectation(r.rho), std::nullopt};
            const MinPtResult mpt = min_pt_eigenvalue(r.rho);
            rep.min_pt_eig = ValueWithError{mpt.value, std::nullopt};
            rep.min_pt_cut = mpt.cut_label();
            if (opt.p_given)
                rep.fidelity_with_target =
                    ValueWithError{fidelity(r.rho, target_for(set, opt.p, opt.bell_mu)), std::nullopt};
        } else if (!rep.witness_from_counts) {
            throw validation_error(
                "four-qubit counts offer neither the witness blocks nor full tomography");
        }
        return rep;
    }

    const MleResult r = mle_reconstruct(set);
    McConfig cfg;
    cfg.iterations = opt.mc_iterations;
    cfg.seed = opt.seed;
    const McResult mc_tan = monte_carlo_errors(set, McStatistic::tangle, cfg);
    const McResult mc_pt = monte_carlo_errors(set, McStatistic::min_pt_eig, cfg);
    rep.tangle = ValueWithError{tangle(r.rho), mc_tan.stddev};
    const MinPtResult mpt = min_pt_eigenvalue(r.rho);
    rep.min_pt_eig = ValueWithError{mpt.value, mc_pt.stddev};
    rep.min_pt_cut = mpt.cut_label();
    if (opt.p_given) {
        const Mat target = target_for(set, opt.p, opt.bell_mu);
        const McResult mc_fid =
            monte_carlo_errors(set, McStatistic::fidelity_with, cfg, &target);
        rep.fidelity_with_target = ValueWithError{fidelity(r.rho, target), mc_fid.stddev};
    }
    return rep;
}

int cmd_analyze(const Options& opt) {
    AnalysisReport rep;
    if (!opt.counts_path.empty()) {
        rep = analyze_counts(load_counts(opt.counts_path), opt);
    } else if (!opt.state_path.empty()) {
        const Mat rho = load_density_json(opt.state_path);
        if (rho.rows() == 16)
            rep.witness_from_state = ValueWithError{witness_expectation(rho), std::nullopt};
        if (rho.rows() == 4) rep.tangle = ValueWithError{tangle(rho), std::nullopt};
        const MinPtResult mpt = min_pt_eigenvalue(rho);
        rep.min_pt_eig = ValueWithError{mpt.value, std::nullopt};
        rep.min_pt_cut = mpt.cut_label();
        if (opt.p_given) {
            Mat target = rho.rows() == 16 ? noisy_smolin(opt.p)
                                          : werner_state(1.0 - opt.p, opt.bell_mu);
            rep.fidelity_with_target = ValueWithError{fidelity(rho, target), std::nullopt};
        }
    } else {
        throw validation_error("analyze needs --counts <file> or a state file argument");
    }
    print_report(rep, opt.format);
    if (!opt.out.empty()) write_report(rep, opt.out);
    return 0;
}

int cmd_simulate(const Options& opt) {
    auto [s1, s2] = load_sources(opt.source_model_path);
    const Mat rho = twirl_mixture(opt.p, imperfect_source(s1), imperfect_source(s2));
    Rng rng = make_rng(opt.seed);
    const auto bases = opt.witness_only ? witness_bases() : all_bases(4);
    const CountSet set = simulate_counts(rho, bases, opt.counts_per_setting, rng);
    const std::string dir = opt.out.empty() ? "." : opt.out;
    ensure_dir(dir);
    const std::string path = dir + "/" + counts_file_name("counts_sim", opt.format);
    save_counts(set, path, opt.format);
    std::fprintf(stderr, "%zu blocks written to %s\n", set.blocks.size(), path.c_str());
    return 0;
}

int cmd_unlock(const Options& opt) {
    auto [s1, s2] = load_sources(opt.source_model_path);
    BellProjectionSpec spec;
    spec.mu = opt.bell_mu;
    spec.visibility = opt.visibility;
    spec.chi = opt.chi;
    Rng rng = make_rng(opt.seed);
    const CountSet set =
        simulate_unlocking_run(opt.p, s1, s2, spec, opt.counts_per_setting, rng);

    const std::string dir = opt.out.empty() ? "." : opt.out;
    ensure_dir(dir);
    const std::string counts_path = dir + "/" + counts_file_name("counts_unlock", opt.format);
    save_counts(set, counts_path, opt.format);

    Options analysis_opt = opt;
    analysis_opt.counts_path = counts_path;
    const AnalysisReport rep = analyze_counts(set, analysis_opt);
    print_report(rep, opt.format);
    write_report(rep, dir + "/report_unlock.json");
    std::fprintf(stderr, "counts written to %s\n", counts_path.c_str());
    return 0;
}

int cmd_mc(const Options& opt) {
    if (opt.counts_path.empty()) throw validation_error("mc needs --counts <file>");
    const CountSet set = load_counts(opt.counts_path);
    const McStatistic stat = mc_statistic_from_name(opt.stat);
    Mat target;
    const Mat* target_ptr = nullptr;
    if (stat == McStatistic::fidelity_with) {
        if (!opt.p_given)
            throw validation_error("fidelity statistic needs --p to fix the target state");
        target = target_for(set, opt.p, opt.bell_mu);
        target_ptr = &target;
    }
    McConfig cfg;
    cfg.iterations = opt.mc_iterations;
    cfg.seed = opt.seed;
    const McResult r = monte_carlo_errors(set, stat, cfg, target_ptr);

    json j{{"statistic", opt.stat},
           {"iterations", cfg.iterations},
           {"seed", cfg.seed},
           {"mean", r.mean},
           {"stddev", r.stddev},
           {"bin_edges", r.bin_edges},
           {"bin_counts", r.bin_counts}};
    if (opt.format == "json")
        std::printf("%s\n", j.dump(1).c_str());
    else
        std::printf("%s: mean %.6f stddev %.6f over %d iterations\n", opt.stat.c_str(), r.mean,
                    r.stddev, cfg.iterations);
    if (!opt.out.empty()) {
        std::ofstream out(opt.out);
        if (!out) throw validation_error("cannot open output file: " + opt.out);
        out << j.dump(1) << "\n";
    }
    return 0;
}

int cmd_reproduce(const Options& opt) {
    const std::string dir = opt.out.empty() ? "reproduce_out" : opt.out;
    ensure_dir(dir);
    const std::string data_dir = opt.counts_path.empty() ? std::string(SMOLIN_DATA_DIR)
                                                         : opt.counts_path;

    // (i) theory curves on the mixing-parameter grid
    {
        std::ofstream out(dir + "/theory_curves.csv");
        if (!out) throw validation_error("cannot write theory curves");
        out << "p,witness,min_pt_eig\n";
        char buf[96];
        for (int k = 0; k <= 100; ++k) {
            const double p = k / 100.0;
            std::snprintf(buf, sizeof buf, "%.2f,%.12f,%.12f\n", p, 3.0 * p - 2.0, p / 16.0);
            out << buf;
        }
    }
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = (lo + hi) / 2.0;
        (witness_expectation(noisy_smolin(mid)) < 0.0 ? lo : hi) = mid;
    }
    const double crossing = (lo + hi) / 2.0;
    std::printf("theory witness zero crossing: p = %.12f\n", crossing);

    // (ii) simulated experiment points with fitted sources
    auto [s1, s2] = load_sources(data_dir + "/sources.json");
    const Mat src1 = imperfect_source(s1);
    const Mat src2 = imperfect_source(s2);
    const std::vector<double> grid{0.0, 0.25, 0.44, 0.49, 0.75, 1.0};

    std::ofstream pts(dir + "/simulated_points.csv");
    if (!pts) throw validation_error("cannot write simulated points");
    pts << "p,witness,witness_sigma,min_pt_eig,min_pt_sigma\n";
    std::ofstream summary(dir + "/summary.csv");
    if (!summary) throw validation_error("cannot write summary");
    summary << "p,fidelity_with_family,min_pt_eig,witness_est,witness_sum\n";

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = grid[i];
        Rng rng = make_rng(derive_seed(opt.seed, i));
        const Mat rho = twirl_mixture(p, src1, src2);
        const CountSet counts = simulate_counts(rho, all_bases(4), opt.counts_per_setting, rng);

        const Estimate w = witness_from_counts(counts);
        McConfig wc;
        wc.iterations = std::max(opt.mc_iterations, 100);
        wc.seed = derive_seed(opt.seed, 100 + i);
        const McResult mc_w = monte_carlo_errors(counts, McStatistic::witness, wc);

        const MleResult mle = mle_reconstruct(counts);
        const double mpt = min_pt_eigenvalue(mle.rho).value;
        McConfig pc;
        pc.iterations = std::min(opt.mc_iterations, 50);
        pc.seed = derive_seed(opt.seed, 200 + i);
        const McResult mc_pt = monte_carlo_errors(counts, McStatistic::min_pt_eig, pc);

        char buf[200];
        std::snprintf(buf, sizeof buf, "%.2f,%.6f,%.6f,%.6f,%.6f\n", p, w.value, mc_w.stddev,
                      mpt, mc_pt.stddev);
        pts << buf;
        std::snprintf(buf, sizeof buf, "%.2f,%.6f,%.6f,%.6f,%.6f\n", p,
                      fidelity(mle.rho, noisy_smolin(p)), mpt,
                      witness_expectation(mle.rho), w.value);
        summary << buf;
        std::printf("simulated p=%.2f: witness %.4f +- %.4f, min PT %.6f +- %.6f\n", p, w.value,
                    mc_w.stddev, mpt, mc_pt.stddev);
    }

    // (iii) re-analysis of the bundled count tables
    json reanalysis;
    {
        const CountSet wset = load_counts(data_dir + "/witness_counts_p049.csv");
        const Estimate w = witness_from_counts(wset);
        reanalysis["witness_counts"] = {{"witness", w.value}, {"sigma", w.sigma}};
        std::printf("bundled witness counts: %.6f +- %.6f\n", w.value, w.sigma);

        const CountSet uset = load_counts(data_dir + "/unlock_tomography_p049.csv");
        const MleResult r = mle_reconstruct(uset);
        McConfig cfg;
        cfg.iterations = std::max(opt.mc_iterations, 100);
        cfg.seed = derive_seed(opt.seed, 999);
        const McResult mc_tan = monte_carlo_errors(uset, McStatistic::tangle, cfg);
        const McResult mc_pt = monte_carlo_errors(uset, McStatistic::min_pt_eig, cfg);
        reanalysis["unlock_tomography"] = {{"tangle", tangle(r.rho)},
                                           {"tangle_sigma", mc_tan.stddev},
                                           {"min_pt_eig", min_pt_eigenvalue(r.rho).value},
                                           {"min_pt_sigma", mc_pt.stddev}};
        std::printf("bundled unlock tomography: tangle %.6f +- %.6f, min PT %.6f +- %.6f\n",
                    tangle(r.rho), mc_tan.stddev, min_pt_eigenvalue(r.rho).value, mc_pt.stddev);
    }
    reanalysis["theory_witness_zero_crossing"] = crossing;
    {
        std::ofstream out(dir + "/reanalysis.json");
        if (!out) throw validation_error("cannot write reanalysis");
        out << reanalysis.dump(1) << "\n";
    }
    std::printf("artifacts written to %s\n", dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bound-entanglement toolkit: noisy Bell-pair mixtures, count-level "
                 "tomography simulation, ML reconstruction, and unlocking runs"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", opt.seed, "RNG seed; fixed seeds give identical outputs");
        cmd->add_option("--format", opt.format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", opt.out, "output file or directory");
    };
    auto add_p = [&](CLI::App* cmd) {
        cmd->add_option("--p", opt.p, "mixing parameter in [0,1]")
            ->each([&](const std::string&) { opt.p_given = true; });
    };

    CLI::App* state = app.add_subcommand("state", "write a family state as density JSON");
    add_common(state);
    add_p(state);
    state->add_option("--source-model", opt.source_model_path,
                      "source model JSON; omitted means ideal pair sources");

    CLI::App* analyze = app.add_subcommand("analyze", "report on a state file or count data");
    add_common(analyze);
    add_p(analyze);
    analyze->add_option("state_file", opt.state_path, "density JSON to analyze");
    analyze->add_option("--counts", opt.counts_path, "count file (csv or json) to analyze");
    analyze->add_option("--mc-iterations", opt.mc_iterations,
                        "Monte-Carlo iterations for reconstruction error bars");

    CLI::App* simulate = app.add_subcommand("simulate", "simulate four-qubit tomography counts");
    add_common(simulate);
    add_p(simulate);
    simulate->add_option("--source-model", opt.source_model_path, "source model JSON");
    simulate->add_option("--counts", opt.counts_per_setting, "mean counts per setting");
    simulate->add_flag("--witness-only", opt.witness_only,
                       "emit only the three witness settings");

    CLI::App* unlock = app.add_subcommand("unlock", "simulate a Bell-projection unlocking run");
    add_common(unlock);
    add_p(unlock);
    unlock->add_option("--source-model", opt.source_model_path, "source model JSON");
    unlock->add_option("--counts", opt.counts_per_setting, "mean counts per setting");
    unlock->add_option("--mu", opt.bell_mu, "Bell outcome projected on (0..3)");
    unlock->add_option("--visibility", opt.visibility, "two-photon interference visibility");
    unlock->add_option("--chi", opt.chi, "residual phase on the first measured qubit");
    unlock->add_option("--mc-iterations", opt.mc_iterations,
                       "Monte-Carlo iterations for the report error bars");

    CLI::App* mc = app.add_subcommand("mc", "Monte-Carlo error bars for a count file");
    add_common(mc);
    add_p(mc);
    mc->add_option("--counts", opt.counts_path, "count file (csv or json)")->required();
    mc->add_option("--stat", opt.stat, "witness | min_pt | fidelity | tangle");
    mc->add_option("--iterations", opt.mc_iterations, "number of resampling iterations");

    CLI::App* reproduce =
        app.add_subcommand("reproduce", "rebuild theory curves, simulated points, and "
                                        "re-analysis artifacts from the bundled data");
    add_common(reproduce);
    reproduce->add_option("--counts", opt.counts_path,
                          "override the bundled data directory");
    reproduce->add_option("--counts-per-setting", opt.counts_per_setting,
                          "mean counts per simulated setting");
    reproduce->add_option("--mc-iterations", opt.mc_iterations,
                          "Monte-Carlo iterations for simulated error bars");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*state) return cmd_state(opt);
        if (*analyze) return cmd_analyze(opt);
        if (*simulate) return cmd_simulate(opt);
        if (*unlock) return cmd_unlock(opt);
        if (*mc) {
            if (mc->count("--iterations") == 0) opt.mc_iterations = 500;
            return cmd_mc(opt);
        }
        if (*reproduce) return cmd_reproduce(opt);
    } catch (const validation_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 2;
}
