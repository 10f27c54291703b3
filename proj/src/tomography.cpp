#include "smolin/tomography.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

#include "smolin/analysis.hpp"
#include "smolin/errors.hpp"

namespace smolin {

Vec analyzer_state(char label) {
    const double s = 1.0 / std::sqrt(2.0);
    Vec v(2);
    switch (label) {
        case 'H': v << 1, 0; break;
        case 'V': v << 0, 1; break;
        case 'P': v << s, s; break;
        case 'M': v << s, -s; break;
        case 'R': v << s, cx(0, s); break;
        case 'L': v << s, cx(0, -s); break;
        default: throw validation_error(std::string("unknown analyzer label '") + label + "'");
    }
    return v;
}

Mat analyzer_projector(char label) {
    Vec v = analyzer_state(label);
    return v * v.adjoint();
}

char basis_rep(char label) {
    switch (label) {
        case 'H': case 'V': return 'H';
        case 'P': case 'M': return 'P';
        case 'R': case 'L': return 'R';
        default: throw validation_error(std::string("unknown analyzer label '") + label + "'");
    }
}

char complement_label(char label) {
    switch (label) {
        case 'H': return 'V'; case 'V': return 'H';
        case 'P': return 'M'; case 'M': return 'P';
        case 'R': return 'L'; case 'L': return 'R';
        default: throw validation_error(std::string("unknown analyzer label '") + label + "'");
    }
}

int label_parity(char label) {
    return (label == basis_rep(label)) ? 1 : -1;
}

std::vector<Outcome> setting_outcomes(const std::string& setting) {
    const int n = static_cast<int>(setting.size());
    if (n < 1 || n > 8) throw validation_error("setting string length out of range");
    std::string rep(setting);
    for (char& ch : rep) ch = basis_rep(ch);
    std::vector<Outcome> out;
    out.reserve(std::size_t(1) << n);
    for (int bits = 0; bits < (1 << n); ++bits) {
        std::string label(rep);
        for (int q = 0; q < n; ++q)
            if ((bits >> (n - 1 - q)) & 1) label[std::size_t(q)] = complement_label(label[std::size_t(q)]);
        Vec v = analyzer_state(label[0]);
        for (int q = 1; q < n; ++q) v = tensor(v, analyzer_state(label[std::size_t(q)]));
        out.push_back({label, std::move(v)});
    }
    return out;
}

std::string CountBlock::outcome_label(int index) const {
    const int n = static_cast<int>(basis.size());
    std::string label(basis);
    for (int q = 0; q < n; ++q)
        if ((index >> (n - 1 - q)) & 1) label[std::size_t(q)] = complement_label(label[std::size_t(q)]);
    return label;
}

double CountBlock::total() const {
    double t = 0.0;
    for (double c : counts) t += c;
    return t;
}

const CountBlock* CountSet::find(const std::string& basis) const {
    for (const auto& b : blocks)
        if (b.basis == basis) return &b;
    return nullptr;
}

double CountSet::total() const {
    double t = 0.0;
    for (const auto& b : blocks) t += b.total();
    return t;
}

std::vector<std::string> all_bases(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 8) throw validation_error("qubit count out of range");
    const char reps[3] = {'H', 'P', 'R'};
    int total = 1;
    for (int q = 0; q < n_qubits; ++q) total *= 3;
    std::vector<std::string> out;
    out.reserve(std::size_t(total));
    for (int idx = 0; idx < total; ++idx) {
        std::string basis(std::size_t(n_qubits), 'H');
        int rem = idx;
        for (int q = n_qubits - 1; q >= 0; --q) {
            basis[std::size_t(q)] = reps[rem % 3];
            rem /= 3;
        }
        out.push_back(std::move(basis));
    }
    return out;
}

std::vector<std::string> witness_bases() { return {"HHHH", "PPPP", "RRRR"}; }

namespace {

std::vector<double> outcome_probabilities(const Mat& rho, const std::vector<Outcome>& outcomes) {
    std::vector<double> p;
    p.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        double v = (o.state.adjoint() * rho * o.state)(0).real();
        p.push_back(std::max(v, 0.0));
    }
    return p;
}

CountSet counts_from_generator(const Mat& rho, const std::vector<std::string>& bases,
                               double mean_total, bool sample, Rng* rng) {
    if (mean_total <= 0.0) throw validation_error("mean counts per setting must be positive");
    const int n = qubit_count(rho.rows());
    CountSet set;
    set.n_qubits = n;
    for (const auto& basis_raw : bases) {
        if (static_cast<int>(basis_raw.size()) != n)
            throw validation_error("setting length does not match the state's qubit count");
        std::string basis(basis_raw);
        for (char& ch : basis) ch = basis_rep(ch);
        auto outcomes = setting_outcomes(basis);
        auto p = outcome_probabilities(rho, outcomes);
        CountBlock block;
        block.basis = basis;
        block.counts.resize(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            double mean = mean_total * p[i];
            if (sample) {
                if (mean > 0.0) {
                    std::poisson_distribution<long long> poisson(mean);
                    block.counts[i] = static_cast<double>(poisson(*rng));
                } else {
                    block.counts[i] = 0.0;
                }
            } else {
                block.counts[i] = mean;
            }
        }
        set.blocks.push_back(std::move(block));
    }
    std::sort(set.blocks.begin(), set.blocks.end(),
              [](const CountBlock& a, const CountBlock& b) { return a.basis < b.basis; });
    return set;
}

} // namespace

CountSet simulate_counts(const Mat& rho, const std::vector<std::string>& bases,
                         double mean_total_per_setting, Rng& rng) {
    return counts_from_generator(rho, bases, mean_total_per_setting, true, &rng);
}

CountSet expected_counts(const Mat& rho, const std::vector<std::string>& bases,
                         double mean_total_per_setting) {
    return counts_from_generator(rho, bases, mean_total_per_setting, false, nullptr);
}

Estimate pauli_expectation_from_counts(const CountBlock& block) {
    const int n = static_cast<int>(block.basis.size());
    if (block.counts.size() != (std::size_t(1) << n))
        throw validation_error("count block does not span its full outcome set");
    double total = block.total();
    if (total <= 0.0) throw validation_error("count block has zero total counts");
    double signed_sum = 0.0;
    for (std::size_t i = 0; i < block.counts.size(); ++i) {
        int parity = (std::popcount(i) % 2 == 0) ? 1 : -1;
        signed_sum += parity * block.counts[i];
    }
    const double e = signed_sum / total;
    // independent Poisson counts: var = sum_o c_o ((s_o - E)/N)^2
    double var = 0.0;
    for (std::size_t i = 0; i < block.counts.size(); ++i) {
        int parity = (std::popcount(i) % 2 == 0) ? 1 : -1;
        double d = (parity - e) / total;
        var += block.counts[i] * d * d;
    }
    return {e, std::sqrt(var)};
}

Estimate witness_from_counts(const CountBlock& z, const CountBlock& x, const CountBlock& y) {
    for (const CountBlock* b : {&z, &x, &y})
        if (b->basis.size() != 4) throw validation_error("witness estimation needs four-qubit blocks");
    if (z.basis != "HHHH" || x.basis != "PPPP" || y.basis != "RRRR")
        throw validation_error("witness estimation needs the HHHH, PPPP, RRRR blocks");
    Estimate ez = pauli_expectation_from_counts(z);
    Estimate ex = pauli_expectation_from_counts(x);
    Estimate ey = pauli_expectation_from_counts(y);
    double value = 1.0 - ez.value - ex.value - ey.value;
    double sigma = std::sqrt(ez.sigma * ez.sigma + ex.sigma * ex.sigma + ey.sigma * ey.sigma);
    return {value, sigma};
}

Estimate witness_from_counts(const CountSet& set) {
    if (set.n_qubits != 4) throw validation_error("witness estimation needs four-qubit data");
    const CountBlock* z = set.find("HHHH");
    const CountBlock* x = set.find("PPPP");
    const CountBlock* y = set.find("RRRR");
    if (!z || !x || !y)
        throw validation_error("witness estimation needs the HHHH, PPPP, RRRR blocks");
    return witness_from_counts(*z, *x, *y);
}

// ---- maximum-likelihood reconstruction ----

namespace {

struct Design {
    Eigen::Index dim = 0;
    Mat vectors;                                 // dim x J, one column per outcome projector
    std::vector<std::pair<int, int>> block_range; // [begin, end) per block
};

Design build_design(const CountSet& set) {
    if (set.blocks.empty()) throw validation_error("empty count set");
    Design d;
    d.dim = Eigen::Index(1) << set.n_qubits;
    Eigen::Index j_total = 0;
    for (const auto& b : set.blocks) j_total += static_cast<Eigen::Index>(b.counts.size());
    d.vectors.resize(d.dim, j_total);
    Eigen::Index j = 0;
    for (const auto& b : set.blocks) {
        auto outcomes = setting_outcomes(b.basis);
        if (outcomes.size() != b.counts.size())
            throw validation_error("count block does not span its full outcome set");
        d.block_range.emplace_back(static_cast<int>(j), static_cast<int>(j + outcomes.size()));
        for (auto& o : outcomes) d.vectors.col(j++) = o.state;
    }
    return d;
}

void check_informationally_complete(const Design& d) {
    // rank of the stacked vec(Pi_j) rows must reach dim^2
    const Eigen::Index d2 = d.dim * d.dim;
    Mat stacked(d.vectors.cols(), d2);
    for (Eigen::Index j = 0; j < d.vectors.cols(); ++j) {
        Mat pi = d.vectors.col(j) * d.vectors.col(j).adjoint();
        stacked.row(j) = Eigen::Map<Vec>(pi.data(), d2).transpose();
    }
    Eigen::ColPivHouseholderQR<Mat> qr(stacked);
    qr.setThreshold(1e-8);
    if (qr.rank() < d2)
        throw numeric_error("measurement set is not informationally complete (rank "
                            + std::to_string(qr.rank()) + " of " + std::to_string(d2) + ")");
}

Eigen::VectorXd flatten_counts(const CountSet& set) {
    std::vector<double> flat;
    for (const auto& b : set.blocks) flat.insert(flat.end(), b.counts.begin(), b.counts.end());
    return Eigen::Map<Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size()));
}

Eigen::VectorXd model_probabilities(const Design& d, const Mat& rho) {
    Mat m = rho * d.vectors; // dim x J
    return d.vectors.conjugate().cwiseProduct(m).colwise().sum().real().transpose();
}

double log_likelihood(const Eigen::VectorXd& counts, const Eigen::VectorXd& p, double floor) {
    double ll = 0.0;
    for (Eigen::Index j = 0; j < counts.size(); ++j)
        if (counts(j) > 0.0) ll += counts(j) * std::log(std::max(p(j), floor));
    return ll;
}

MleResult mle_run(const Design& d, const Eigen::VectorXd& counts, const ReconstructionConfig& cfg) {
    if (cfg.max_iterations < 1 || cfg.stop_delta <= 0.0 || cfg.probability_floor <= 0.0)
        throw validation_error("reconstruction config values must be positive");
    if (counts.size() != d.vectors.cols())
        throw validation_error("count vector does not match the measurement design");
    const double n_total = counts.sum();
    if (n_total <= 0.0) throw validation_error("count set has zero total counts");
    // per-block frequencies weighted by block share collapse to c_j / N_total
    Eigen::VectorXd w = counts / n_total;

    MleResult out;
    out.rho = Mat::Identity(d.dim, d.dim) / static_cast<double>(d.dim);
    double ll_prev = log_likelihood(counts, model_probabilities(d, out.rho), cfg.probability_floor);
    out.ll_trace.push_back(ll_prev);

    auto normalize = [](Mat m) {
        m = (m + m.adjoint()) / 2.0;
        return Mat(m / m.trace().real());
    };

    for (int it = 0; it < cfg.max_iterations; ++it) {
        Eigen::VectorXd p = model_probabilities(d, out.rho).cwiseMax(cfg.probability_floor);
        Mat r = d.vectors * w.cwiseQuotient(p).asDiagonal() * d.vectors.adjoint();
        Mat cand = normalize(r * out.rho * r);
        double ll = log_likelihood(counts, model_probabilities(d, cand), cfg.probability_floor);
        if (ll < ll_prev) {
            // diluted step: contraction toward the current iterate
            double eps = 0.1;
            while (true) {
                Mat g = Mat::Identity(d.dim, d.dim) + eps * r;
                cand = normalize(g * out.rho * g.adjoint());
                ll = log_likelihood(counts, model_probabilities(d, cand), cfg.probability_floor);
                if (ll >= ll_prev || eps < 1e-8) break;
                eps /= 2.0;
            }
        }
        out.rho = cand;
        out.iterations = it + 1;
        out.ll_trace.push_back(ll);
        if (std::abs(ll - ll_prev) < cfg.stop_delta) {
            out.converged = true;
            out.log_likelihood = ll;
            break;
        }
        ll_prev = ll;
        out.log_likelihood = ll;
    }
    return out;
}

} // namespace

MleResult mle_reconstruct(const CountSet& set, const ReconstructionConfig& cfg) {
    Design d = build_design(set);
    check_informationally_complete(d);
    return mle_run(d, flatten_counts(set), cfg);
}

Mat independent_mle_oracle(const CountSet& set, int budget) {
    if (set.n_qubits > 2) throw validation_error("cross-check optimizer is limited to two qubits");
    if (budget < 1) throw validation_error("optimizer budget must be positive");
    Design d = build_design(set);
    check_informationally_complete(d);
    Eigen::VectorXd counts = flatten_counts(set);
    if (counts.sum() <= 0.0) throw validation_error("count set has zero total counts");

    const Eigen::Index dim = d.dim;
    std::vector<std::pair<int, int>> tri;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) tri.emplace_back(i, j);
    const int n_par = static_cast<int>(dim + 2 * (tri.size() - std::size_t(dim)));

    auto build = [&](const Eigen::VectorXd& params) {
        Mat t = Mat::Zero(dim, dim);
        int k = 0;
        for (auto [i, j] : tri) {
            if (i == j)
                t(i, j) = params(k++);
            else {
                t(i, j) = cx(params(k), params(k + 1));
                k += 2;
            }
        }
        Mat rho = t.adjoint() * t;
        return Mat(rho / rho.trace().real());
    };
    auto ll_of = [&](const Eigen::VectorXd& params) {
        return log_likelihood(counts, model_probabilities(d, build(params)), 1e-300);
    };

    Eigen::VectorXd params = Eigen::VectorXd::Zero(n_par);
    {
        int k = 0;
        for (auto [i, j] : tri) {
            if (i == j) params(k++) = 1.0 / std::sqrt(static_cast<double>(dim));
            else k += 2;
        }
    }
    double cur = ll_of(params);
    const double h = 1e-6;
    double step = 1e-3;
    for (int it = 0; it < budget; ++it) {
        Eigen::VectorXd grad(n_par);
        for (int m = 0; m < n_par; ++m) {
            Eigen::VectorXd plus = params, minus = params;
            plus(m) += h;
            minus(m) -= h;
            grad(m) = (ll_of(plus) - ll_of(minus)) / (2.0 * h);
        }
        double gn = grad.norm();
        if (gn < 1e-7) break;
        double s = step;
        bool advanced = false;
        while (s > 1e-14) {
            Eigen::VectorXd cand = params + s * grad / gn;
            double ll = ll_of(cand);
            if (ll > cur) {
                params = cand;
                cur = ll;
                step = std::min(s * 2.0, 1.0);
                advanced = true;
                break;
            }
            s /= 2.0;
        }
        if (!advanced) break;
    }
    return build(params);
}

McStatistic mc_statistic_from_name(const std::string& name) {
    if (name == "witness") return McStatistic::witness;
    if (name == "min_pt" || name == "min_pt_eig") return McStatistic::min_pt_eig;
    if (name == "fidelity" || name == "fidelity_with") return McStatistic::fidelity_with;
    if (name == "tangle") return McStatistic::tangle;
    throw validation_error("unknown statistic '" + name + "'");
}

namespace {

CountSet resample_poisson(const CountSet& set, Rng& rng) {
    CountSet out = set;
    for (auto& block : out.blocks)
        for (double& c : block.counts) {
            if (c > 0.0) {
                std::poisson_distribution<long long> poisson(c);
                c = static_cast<double>(poisson(rng));
            }
        }
    return out;
}

void fd_histogram(const std::vector<double>& samples, std::vector<double>& edges,
                  std::vector<long>& bins) {
    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    auto quantile = [&](double q) {
        double pos = q * static_cast<double>(n - 1);
        std::size_t lo = static_cast<std::size_t>(pos);
        std::size_t hi = std::min(lo + 1, n - 1);
        double frac = pos - static_cast<double>(lo);
        return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
    };
    const double lo = sorted.front(), hi = sorted.back();
    const double iqr = quantile(0.75) - quantile(0.25);
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
    int n_bins = 1;
    if (width > 0.0 && hi > lo)
        n_bins = std::clamp(static_cast<int>(std::ceil((hi - lo) / width)), 1, 200);
    edges.resize(std::size_t(n_bins) + 1);
    const double span = (hi > lo) ? (hi - lo) : 1.0;
    for (int i = 0; i <= n_bins; ++i)
        edges[std::size_t(i)] = lo + span * static_cast<double>(i) / n_bins;
    bins.assign(std::size_t(n_bins), 0);
    for (double v : samples) {
        int b = static_cast<int>((v - lo) / span * n_bins);
        b = std::clamp(b, 0, n_bins - 1);
        ++bins[std::size_t(b)];
    }
}

} // namespace

McResult monte_carlo_errors(const CountSet& set, McStatistic stat, const McConfig& cfg,
                            const Mat* fidelity_target) {
    if (cfg.iterations < 1) throw validation_error("Monte-Carlo iterations must be >= 1");
    if (stat == McStatistic::fidelity_with && fidelity_target == nullptr)
        throw validation_error("fidelity statistic needs a target state");
    if (stat == McStatistic::tangle && set.n_qubits != 2)
        throw validation_error("tangle statistic needs two-qubit data");
    if (stat == McStatistic::witness && set.n_qubits != 4)
        throw validation_error("witness statistic needs four-qubit data");

    const bool needs_mle = stat != McStatistic::witness;
    Design design;
    ReconstructionConfig rc;
    if (needs_mle) {
        design = build_design(set);
        check_informationally_complete(design);
    }

    auto evaluate = [&](const CountSet& resampled) {
        switch (stat) {
            case McStatistic::witness:
                return witness_from_counts(resampled).value;
            case McStatistic::min_pt_eig: {
                MleResult r = mle_run(design, flatten_counts(resampled), rc);
                return min_pt_eigenvalue(r.rho).value;
            }
            case McStatistic::fidelity_with: {
                MleResult r = mle_run(design, flatten_counts(resampled), rc);
                return fidelity(r.rho, *fidelity_target);
            }
            case McStatistic::tangle: {
                MleResult r = mle_run(design, flatten_counts(resampled), rc);
                return tangle(r.rho);
            }
        }
        throw validation_error("unknown statistic");
    };

    McResult out;
    out.samples.resize(std::size_t(cfg.iterations));
    const unsigned n_threads =
        std::max(1u, std::min(std::thread::hardware_concurrency(),
                              static_cast<unsigned>(cfg.iterations)));
    auto worker = [&](unsigned tid) {
        for (int i = static_cast<int>(tid); i < cfg.iterations; i += static_cast<int>(n_threads)) {
            Rng rng = make_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
            CountSet resampled = resample_poisson(set, rng);
            out.samples[std::size_t(i)] = evaluate(resampled);
        }
    };
    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    double mean = 0.0;
    for (double v : out.samples) mean += v;
    mean /= static_cast<double>(out.samples.size());
    double var = 0.0;
    for (double v : out.samples) var += (v - mean) * (v - mean);
    if (out.samples.size() > 1) var /= static_cast<double>(out.samples.size() - 1);
    out.mean = mean;
    out.stddev = std::sqrt(var);
    fd_histogram(out.samples, out.bin_edges, out.bin_counts);
    return out;
}

CountBlock combine_complementary(const CountBlock& a, const CountBlock& b) {
    if (a.basis != b.basis) throw validation_error("complementary blocks must share a basis");
    if (a.counts.size() != b.counts.size() || a.counts.empty())
        throw validation_error("complementary blocks must share an outcome set");
    const std::size_t mask = a.counts.size() - 1;
    CountBlock out;
    out.basis = a.basis;
    out.counts.resize(a.counts.size());
    for (std::size_t i = 0; i < a.counts.size(); ++i)
        out.counts[i] = a.counts[i] + b.counts[i ^ mask]; // role swap flips every port
    return out;
}

} // namespace smolin
