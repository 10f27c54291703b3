#include "smolin/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "smolin/errors.hpp"

namespace smolin {

using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw validation_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open file for writing: " + path);
    out << text;
    if (!out) throw validation_error("write failed: " + path);
}

std::string format_count(double c) {
    if (c == std::floor(c) && std::abs(c) < 1e15) {
        std::ostringstream os;
        os << static_cast<long long>(c);
        return os.str();
    }
    std::ostringstream os;
    os.precision(12);
    os << c;
    return os.str();
}

CountSet counts_from_rows(const std::vector<std::tuple<std::string, std::string, double>>& rows,
                          const std::string& origin) {
    if (rows.empty()) throw validation_error("no count rows in " + origin);
    const std::size_t n = std::get<0>(rows.front()).size();
    std::map<std::string, std::vector<double>> merged;
    for (const auto& [setting, outcome, count] : rows) {
        if (setting.size() != n || outcome.size() != n)
            throw validation_error(origin + ": inconsistent setting/outcome lengths");
        if (count < 0.0) throw validation_error(origin + ": negative count");
        std::string basis(setting);
        int index = 0;
        for (std::size_t q = 0; q < n; ++q) {
            basis[q] = basis_rep(setting[q]);
            if (basis_rep(outcome[q]) != basis[q])
                throw validation_error(origin + ": outcome '" + outcome +
                                       "' is not in the basis of setting '" + setting + "'");
            index = (index << 1) | (outcome[q] == basis[q] ? 0 : 1);
        }
        auto& counts = merged[basis];
        counts.resize(std::size_t(1) << n, 0.0);
        counts[std::size_t(index)] += count;
    }
    CountSet set;
    set.n_qubits = static_cast<int>(n);
    for (auto& [basis, counts] : merged) set.blocks.push_back({basis, std::move(counts)});
    return set;
}

} // namespace

void save_density_json(const Mat& rho, const std::string& path) {
    const int n = qubit_count(rho.rows());
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < rho.rows(); ++r) {
        json re_row = json::array(), im_row = json::array();
        for (Eigen::Index c = 0; c < rho.cols(); ++c) {
            re_row.push_back(rho(r, c).real());
            im_row.push_back(rho(r, c).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    json j{{"n_qubits", n}, {"re", std::move(re)}, {"im", std::move(im)}};
    write_text_file(path, j.dump(1) + "\n");
}

Mat load_density_json(const std::string& path) {
    json j = read_json_file(path);
    if (!j.contains("n_qubits") || !j.contains("re") || !j.contains("im"))
        throw validation_error(path + ": density file needs n_qubits, re, im");
    const int n = j["n_qubits"].get<int>();
    if (n < 1 || n > 8) throw validation_error(path + ": qubit count out of range");
    const Eigen::Index dim = Eigen::Index(1) << n;
    const auto& re = j["re"];
    const auto& im = j["im"];
    if (re.size() != std::size_t(dim) || im.size() != std::size_t(dim))
        throw validation_error(path + ": matrix dimensions do not match n_qubits");
    Mat rho(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        if (re[std::size_t(r)].size() != std::size_t(dim) || im[std::size_t(r)].size() != std::size_t(dim))
            throw validation_error(path + ": ragged matrix rows");
        for (Eigen::Index c = 0; c < dim; ++c)
            rho(r, c) = cx(re[std::size_t(r)][std::size_t(c)].get<double>(),
                           im[std::size_t(r)][std::size_t(c)].get<double>());
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
        throw validation_error(path + ": matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-6)
        throw validation_error(path + ": matrix trace is not 1");
    return rho;
}

void save_counts_csv(const CountSet& set, const std::string& path) {
    std::ostringstream os;
    os << "setting,outcome,count\n";
    for (const auto& block : set.blocks)
        for (std::size_t i = 0; i < block.counts.size(); ++i) {
            std::string label = block.outcome_label(static_cast<int>(i));
            os << label << "," << label << "," << format_count(block.counts[i]) << "\n";
        }
    write_text_file(path, os.str());
}

void save_counts_json(const CountSet& set, const std::string& path) {
    json rows = json::array();
    for (const auto& block : set.blocks)
        for (std::size_t i = 0; i < block.counts.size(); ++i) {
            std::string label = block.outcome_label(static_cast<int>(i));
            rows.push_back({{"setting", label}, {"outcome", label}, {"count", block.counts[i]}});
        }
    json j{{"n_qubits", set.n_qubits},
           {"duration_s", nullptr},
           {"loops", nullptr},
           {"rows", std::move(rows)}};
    write_text_file(path, j.dump(1) + "\n");
}

CountSet load_counts_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw validation_error(path + ": empty file");
    auto strip = [](std::string s) {
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
        std::size_t b = 0;
        while (b < s.size() && s[b] == ' ') ++b;
        return s.substr(b);
    };
    if (strip(line) != "setting,outcome,count")
        throw validation_error(path + ": expected header 'setting,outcome,count'");
    std::vector<std::tuple<std::string, std::string, double>> rows;
    while (std::getline(in, line)) {
        line = strip(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string setting, outcome, count_str;
        if (!std::getline(ls, setting, ',') || !std::getline(ls, outcome, ',') ||
            !std::getline(ls, count_str))
            throw validation_error(path + ": malformed row '" + line + "'");
        double count = 0.0;
        try {
            count = std::stod(count_str);
        } catch (const std::exception&) {
            throw validation_error(path + ": bad count in row '" + line + "'");
        }
        rows.emplace_back(strip(setting), strip(outcome), count);
    }
    return counts_from_rows(rows, path);
}

CountSet load_counts_json(const std::string& path) {
    json j = read_json_file(path);
    if (!j.contains("rows")) throw validation_error(path + ": counts JSON needs a rows array");
    std::vector<std::tuple<std::string, std::string, double>> rows;
    for (const auto& row : j["rows"]) {
        if (!row.contains("setting") || !row.contains("outcome") || !row.contains("count"))
            throw validation_error(path + ": count rows need setting, outcome, count");
        rows.emplace_back(row["setting"].get<std::string>(), row["outcome"].get<std::string>(),
                          row["count"].get<double>());
    }
    return counts_from_rows(rows, path);
}

CountSet load_counts(const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return load_counts_json(path);
    return load_counts_csv(path);
}

std::string report_to_json(const AnalysisReport& report) {
    auto entry = [](const std::optional<ValueWithError>& v) {
        if (!v) return json(nullptr);
        json j{{"value", v->value}};
        j["sigma"] = v->sigma ? json(*v->sigma) : json(nullptr);
        return j;
    };
    json j;
    j["witness_from_state"] = entry(report.witness_from_state);
    j["witness_from_counts"] = entry(report.witness_from_counts);
    j["min_pt_eig"] = entry(report.min_pt_eig);
    j["min_pt_cut"] = report.min_pt_cut.empty() ? json(nullptr) : json(report.min_pt_cut);
    j["fidelity_with_target"] = entry(report.fidelity_with_target);
    j["tangle"] = entry(report.tangle);
    return j.dump(1) + "\n";
}

} // namespace smolin
