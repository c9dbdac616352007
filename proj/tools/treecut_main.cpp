// Command-line front end: samplers, cutting procedures, pruning dynamics,
// fragmentation runs, exact small-n checks, and Monte Carlo verification of
// the limit laws.  Every file output gets a manifest with checksums so runs
// can be reproduced bit for bit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "treecut/cutting.hpp"
#include "treecut/dynamics.hpp"
#include "treecut/errors.hpp"
#include "treecut/exact.hpp"
#include "treecut/excursion.hpp"
#include "treecut/fragmentation.hpp"
#include "treecut/manifest.hpp"
#include "treecut/offspring.hpp"
#include "treecut/replicate.hpp"
#include "treecut/rng.hpp"
#include "treecut/samplers.hpp"
#include "treecut/stats.hpp"
#include "treecut/version.hpp"

using namespace treecut;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out;
};

// Writes rows to --out or stdout; file outputs are checksummed into a
// manifest next to the file.
class Sink {
public:
    Sink(const GlobalOptions& options, const std::string& command_line)
        : options_(options), command_line_(command_line),
          start_(std::chrono::steady_clock::now()) {
        if (!options.out.empty()) {
            file_.open(options.out);
            if (!file_) throw InvalidArgument("cannot open output file: " + options.out);
        }
    }

    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

    void finish() {
        if (!file_.is_open()) return;
        file_.close();
        RunManifest manifest;
        manifest.version = kVersion;
        manifest.generator = RngStream::generator_id();
        manifest.command_line = command_line_;
        manifest.seed = options_.seed;
        manifest.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
                .count();
        manifest.outputs.emplace_back(options_.out, fnv1a64_hex_of_file(options_.out));
        write_manifest(manifest, manifest_path_for(options_.out));
    }

private:
    const GlobalOptions& options_;
    std::string command_line_;
    std::chrono::steady_clock::time_point start_;
    std::ofstream file_;
};

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

RootedTree sample_tree(const std::string& model, const OffspringLaw& law, int n, RngStream& rng) {
    if (model == "gw") return sample_conditioned_gw(law, n, rng);
    return sample_cayley(n, rng);
}

// ---------------------------------------------------------------------------

int run_sample(const GlobalOptions& g, const std::string& command_line, const std::string& model,
               const std::string& law_text, int n, long long count) {
    OffspringLaw law = OffspringLaw::parse(law_text);
    Sink sink(g, command_line);
    std::function<std::string(long long, RngStream&)> one = [&](long long, RngStream& rng) {
        if (model == "forest") return to_lines(sample_ordered_forest(n, rng));
        return to_line(sample_tree(model, law, n, rng)) + "\n";
    };
    for (auto& block : run_replicates<std::string>(g.seed, 0, count, g.threads, one))
        sink.stream() << block;
    sink.finish();
    return 0;
}

int run_cut(const GlobalOptions& g, const std::string& command_line, const std::string& mode,
            int n, int k, long long count) {
    Sink sink(g, command_line);
    sink.stream() << "#schema treecut.cut.v1\n";
    sink.stream() << "replicate,n,k,M";
    int columns = mode == "records" ? 1 : k;
    for (int i = 1; i <= columns; ++i) sink.stream() << ",M_" << i;
    sink.stream() << "\n";
    std::function<std::string(long long, RngStream&)> one = [&](long long rep, RngStream& rng) {
        auto t = sample_cayley(n, rng);
        std::ostringstream row;
        if (mode == "records") {
            int kappa = records_count(t, rng);
            row << rep << ',' << n << ',' << 1 << ',' << kappa << ',' << kappa;
        } else {
            std::vector<int> targets;
            for (int i = 0; i < k; ++i)
                targets.push_back(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
            auto trace = mode == "ordered" ? ordered_cut(t, targets, rng)
                                           : planted_cut(t, targets, rng);
            row << rep << ',' << n << ',' << k << ',' << trace.total_cuts();
            for (int step : trace.isolation_steps) row << ',' << step;
        }
        row << '\n';
        return row.str();
    };
    for (auto& row : run_replicates<std::string>(g.seed, 0, count, g.threads, one))
        sink.stream() << row;
    sink.finish();
    return 0;
}

int run_dynamics(const GlobalOptions& g, const std::string& command_line, const std::string& emit,
                 int n, long long count) {
    Sink sink(g, command_line);
    long long violations = 0;
    if (emit == "kappa") sink.stream() << "#schema treecut.dynamics.kappa.v1\nreplicate,kappa\n";
    std::function<std::string(long long, RngStream&)> one = [&](long long rep, RngStream& rng) {
        auto t = sample_cayley(n, rng);
        if (emit == "roundtrip") {
            int v = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            auto f = tree_to_forest(t, v);
            auto [back, marked] = forest_to_tree(f);
            return std::string(back == t && marked == v ? "" : "violation\n");
        }
        auto trace = modified_dynamics(t, rng);
        std::ostringstream row;
        if (emit == "kappa") {
            row << rep << ',' << trace.kappa() << '\n';
        } else if (emit == "forest") {
            row << to_lines(trace.forest);
        } else {  // that
            nlohmann::json j{{"replicate", rep},
                             {"root", t.root()},
                             {"tree", to_line(trace.that_tree)}};
            row << j.dump() << '\n';
        }
        return row.str();
    };
    auto rows = run_replicates<std::string>(g.seed, 0, count, g.threads, one);
    if (emit == "roundtrip") {
        for (auto& row : rows) violations += row.empty() ? 0 : 1;
        sink.stream() << "roundtrip " << count << " replicates, violations=" << violations
                      << (violations == 0 ? " PASS" : " FAIL") << "\n";
        sink.finish();
        return violations == 0 ? 0 : 1;
    }
    for (auto& row : rows) sink.stream() << row;
    sink.finish();
    return 0;
}

int run_fragment(const GlobalOptions& g, const std::string& command_line,
                 const std::string& model, const std::string& law_text,
                 const std::string& sigma_option, const std::string& emit, int n,
                 long long count) {
    OffspringLaw law = OffspringLaw::parse(law_text);
    double sigma = sigma_option == "auto" ? (model == "gw" ? law.sigma() : 1.0)
                                          : std::stod(sigma_option);
    if (!(sigma > 0)) throw InvalidArgument("fragment: sigma must be positive or 'auto'");
    Sink sink(g, command_line);
    if (emit == "kappa")
        sink.stream() << "#schema treecut.fragment.kappa.v1\nreplicate,kappa,mass_sum\n";
    if (emit == "trace")
        sink.stream() << nlohmann::json{{"schema", "treecut.fragment.trace.v1"}}.dump() << "\n";
    std::function<std::string(long long, RngStream&)> one = [&](long long rep, RngStream& rng) {
        auto t = sample_tree(model, law, n, rng);
        auto trace = fragment(t, sigma, rng);
        std::ostringstream row;
        if (emit == "kappa") {
            row << rep << ',' << trace.kappa() << ',' << mass_integral(trace).event_sum << '\n';
        } else if (emit == "trace") {
            for (std::size_t i = 0; i < trace.events.size(); ++i) {
                const auto& ev = trace.events[i];
                nlohmann::json j{{"replicate", rep},          {"i", i + 1},
                                 {"tau", ev.time},            {"vertex", ev.vertex},
                                 {"effective", ev.effective}, {"mu_after", trace.mu_after(i)},
                                 {"L", ev.cuts_after}};
                row << j.dump() << '\n';
            }
        } else {  // that
            auto chained = build_chained_tree(trace, t);
            nlohmann::json j{{"replicate", rep},
                             {"first", chained.first},
                             {"last", chained.last},
                             {"tree", to_line(chained.tree)}};
            row << j.dump() << '\n';
        }
        return row.str();
    };
    for (auto& row : run_replicates<std::string>(g.seed, 0, count, g.threads, one))
        sink.stream() << row;
    sink.finish();
    return 0;
}

int run_excursion(const GlobalOptions& g, const std::string& command_line,
                  const std::string& emit, int n, long long count) {
    Sink sink(g, command_line);
    if (emit == "path")
        sink.stream() << "#schema treecut.excursion.path.v1\nreplicate,index,height,height_rescaled\n";
    else
        sink.stream() << "#schema treecut.excursion.marks.v1\n"
                         "replicate,cut_index,parent_vertex,position,pool\n";
    std::function<std::string(long long, RngStream&)> one = [&](long long rep, RngStream& rng) {
        auto t = sample_cayley(n, rng);
        auto trace = fragment(t, 1.0, rng);
        std::ostringstream rows;
        if (emit == "path") {
            auto bridge = bridge_transform(t, trace);
            double scale = std::sqrt(static_cast<double>(n));
            int h = 0;
            rows << rep << ",0,0,0\n";
            for (std::size_t i = 0; i < bridge.steps.size(); ++i) {
                h += bridge.steps[i];
                rows << rep << ',' << i + 1 << ',' << h << ',' << h / scale << '\n';
            }
        } else {
            for (const auto& mark : attachment_marks(trace, t))
                rows << rep << ',' << mark.cut_index << ',' << mark.parent_vertex << ','
                     << mark.position << ',' << mark.pool << '\n';
        }
        return rows.str();
    };
    for (auto& row : run_replicates<std::string>(g.seed, 0, count, g.threads, one))
        sink.stream() << row;
    sink.finish();
    return 0;
}

int run_oracle(const std::string& check, int n, int k) {
    Rational tv = 0;
    if (check == "key") {
        auto law = oracle::that_root_law(n);
        BigInt outcomes = 1;
        for (int i = 0; i < n; ++i) outcomes *= n;
        oracle::ExactDistribution<std::pair<std::string, int>> uniform;
        for (const auto& t : oracle::enumerate_trees(n))
            for (int w = 1; w <= n; ++w)
                uniform.add({oracle::tree_key(t), w}, Rational(1, outcomes));
        tv = oracle::tv_distance(law, uniform);
    } else if (check == "forest") {
        BigInt forests = 1;
        for (int i = 0; i < n; ++i) forests *= n;
        oracle::ExactDistribution<std::string> uniform;
        for (const auto& f : oracle::enumerate_forests(n))
            uniform.add(oracle::forest_key(f), Rational(1, forests));
        tv = oracle::tv_distance(oracle::forest_law(n), uniform);
    } else if (check == "reverse") {
        BigInt trees = 1;
        for (int i = 0; i < n - 1; ++i) trees *= n;
        oracle::ExactDistribution<std::string> uniform;
        for (const auto& t : oracle::enumerate_trees(n))
            uniform.add(oracle::tree_key(t), Rational(1, trees));
        tv = oracle::tv_distance(oracle::reverse_transform_law(n), uniform);
    } else if (check == "kcoup") {
        auto cuts = oracle::planted_cut_count_mixture(n, k);
        oracle::ExactDistribution<int> shifted;
        for (auto& [m, prob] : cuts.p) shifted.add(m - k, prob);
        tv = oracle::tv_distance(shifted, oracle::spanned_edges_law(n, k));
    } else if (check == "records") {
        for (const auto& t : oracle::enumerate_trees(n))
            tv = std::max(
                tv, oracle::tv_distance(oracle::records_law(t), oracle::dynamics_kappa_law(t)));
    } else if (check == "reorder") {
        for (const auto& t : oracle::enumerate_trees(n)) {
            std::vector<std::vector<int>> target_lists;
            for (int a = 1; a <= n; ++a) {
                if (k <= 1)
                    target_lists.push_back({a});
                else
                    for (int b = 1; b <= n; ++b) target_lists.push_back({a, b});
            }
            for (const auto& targets : target_lists) {
                oracle::ExactDistribution<std::vector<PlantedEdge>> pushed;
                oracle::for_each_cut_history(
                    t, targets, false, oracle::CutWeighting::edge_uniform,
                    [&](const Rational& p, const std::vector<PlantedEdge>& seq) {
                        pushed.add(reorder(t, targets, seq).second, p);
                    });
                tv = std::max(
                    tv, oracle::tv_distance(
                            pushed, oracle::cut_sequence_law(
                                        t, targets, true, oracle::CutWeighting::edge_uniform)));
            }
        }
    } else if (check == "attach") {
        auto joint = oracle::forest_attachment_law(n);
        std::map<std::string, oracle::ExactDistribution<std::vector<int>>> conditional;
        std::map<std::string, Rational> marginal;
        for (auto& [key, prob] : joint.p) {
            conditional[key.first].add(key.second, prob);
            marginal[key.first] += prob;
        }
        for (const auto& f : oracle::enumerate_forests(n)) {
            auto key = oracle::forest_key(f);
            auto cond = conditional[key];
            for (auto& [attach, prob] : cond.p) prob /= marginal[key];
            tv = std::max(tv, oracle::tv_distance(cond, oracle::attachment_product_law(f)));
        }
    } else {
        throw InvalidArgument("unknown check: " + check);
    }
    bool pass = (tv == 0);
    std::printf("check=%s n=%d k=%d TV=%s %s\n", check.c_str(), n, k, tv.str().c_str(),
                pass ? "PASS" : "FAIL");
    return pass ? 0 : 1;
}

int run_verify(const GlobalOptions& g, const std::string& command_line, const std::string& claim,
               const std::string& law_text, int n, int k, long long count) {
    OffspringLaw law = OffspringLaw::parse(law_text);
    std::vector<double> samples;
    stats::ReferenceLaw reference = stats::ReferenceLaw::rayleigh();
    double threshold = 0.05;
    double ks = 0;

    if (claim == "kcoup") {
        // Two-sample comparison: cut counts minus k against spanned edges,
        // both sampled fresh.
        std::function<std::pair<double, double>(long long, RngStream&)> one =
            [&](long long, RngStream& rng) {
                auto t = sample_cayley(n, rng);
                int m;
                if (k == 1) {
                    m = records_count(t, rng);
                } else {
                    std::vector<int> targets;
                    for (int i = 0; i < k; ++i)
                        targets.push_back(
                            1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
                    m = ordered_cut(t, targets, rng).total_cuts();
                }
                auto u = sample_cayley(n, rng);
                std::vector<int> sel{u.root()};
                for (int i = 0; i < k; ++i)
                    sel.push_back(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
                int spanned = spanned_subtree(u, sel).edge_count();
                return std::make_pair(static_cast<double>(m - k), static_cast<double>(spanned));
            };
        auto pairs = run_replicates<std::pair<double, double>>(g.seed, 0, count, g.threads, one);
        std::vector<double> cuts, spans;
        for (auto& [a, b] : pairs) {
            cuts.push_back(a);
            spans.push_back(b);
        }
        stats::EmpiricalDistribution ea(std::move(cuts)), eb(std::move(spans));
        ks = stats::ks_two_sample(ea, eb);
        std::printf("claim=kcoup n=%d k=%d count=%lld KS=%.5f threshold=%.3f %s\n", n, k, count,
                    ks, threshold, ks < threshold ? "PASS" : "FAIL");
        return ks < threshold ? 0 : 1;
    }

    if (claim == "rayleigh") {
        std::function<double(long long, RngStream&)> one = [&](long long, RngStream& rng) {
            auto trace = fragment(sample_cayley(n, rng), 1.0, rng);
            return trace.kappa() / std::sqrt(static_cast<double>(n));
        };
        samples = run_replicates<double>(g.seed, 0, count, g.threads, one);
    } else if (claim == "gw") {
        double sigma = law.sigma();
        std::function<double(long long, RngStream&)> one = [&](long long, RngStream& rng) {
            auto t = sample_conditioned_gw(law, n, rng);
            return records_count(t, rng) / (sigma * std::sqrt(static_cast<double>(n)));
        };
        samples = run_replicates<double>(g.seed, 0, count, g.threads, one);
        threshold = 0.06;
    } else if (claim == "chik") {
        reference = stats::ReferenceLaw::chi_2k(k);
        std::function<double(long long, RngStream&)> one = [&](long long, RngStream& rng) {
            auto t = sample_cayley(n, rng);
            int m;
            if (k == 1) {
                m = records_count(t, rng);
            } else {
                std::vector<int> targets;
                for (int i = 0; i < k; ++i)
                    targets.push_back(
                        1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
                m = ordered_cut(t, targets, rng).total_cuts();
            }
            return m / std::sqrt(static_cast<double>(n));
        };
        samples = run_replicates<double>(g.seed, 0, count, g.threads, one);
    } else {
        throw InvalidArgument("unknown claim: " + claim);
    }

    stats::EmpiricalDistribution emp(std::move(samples));
    ks = stats::ks_distance(emp, reference);
    if (!g.out.empty()) {
        Sink sink(g, command_line);
        sink.stream() << "#schema treecut.verify.cdf.v1\nsample,empirical_cdf,reference_cdf\n";
        const auto& xs = emp.samples();
        for (std::size_t i = 0; i < xs.size(); ++i)
            sink.stream() << xs[i] << ',' << static_cast<double>(i + 1) / xs.size() << ','
                          << reference.cdf(xs[i]) << '\n';
        sink.finish();
    }
    std::printf("claim=%s n=%d k=%d count=%lld KS=%.5f threshold=%.3f %s\n", claim.c_str(), n, k,
                count, ks, threshold, ks < threshold ? "PASS" : "FAIL");
    return ks < threshold ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random tree cutting: samplers, cutting procedures, exact checks"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    app.set_config("--config", "", "key=value file presetting any option; flags override");

    GlobalOptions g;
    app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads for replicates")->capture_default_str();
    app.add_option("--out", g.out, "output file (manifest written alongside)");

    std::string model = "cayley", law_text = "poisson1", mode = "planted", emit = "kappa";
    std::string check = "key", claim = "rayleigh";
    int n = 100, k = 1;
    long long count = 1;
    std::string sigma = "auto";

    auto* sample_cmd = app.add_subcommand("sample", "sample trees or forests");
    sample_cmd->fallthrough();
    sample_cmd->add_option("--model", model, "cayley|gw|forest");
    sample_cmd->add_option("--law", law_text, "poisson1|geom:p|binary:p|table:file");
    sample_cmd->add_option("--n", n, "vertex count")->required();
    sample_cmd->add_option("--count", count, "replicates");

    auto* cut_cmd = app.add_subcommand("cut", "run a cutting procedure on sampled trees");
    cut_cmd->fallthrough();
    cut_cmd->add_option("--mode", mode, "planted|ordered|records");
    cut_cmd->add_option("--n", n, "vertex count")->required();
    cut_cmd->add_option("--k", k, "number of targets");
    cut_cmd->add_option("--count", count, "replicates");

    auto* dynamics_cmd = app.add_subcommand("dynamics", "run the pruning dynamics");
    dynamics_cmd->fallthrough();
    dynamics_cmd->add_option("--n", n, "vertex count")->required();
    dynamics_cmd->add_option("--count", count, "replicates");
    dynamics_cmd->add_option("--emit", emit, "kappa|forest|that|roundtrip");

    auto* fragment_cmd = app.add_subcommand("fragment", "run the Poisson cutting process");
    fragment_cmd->fallthrough();
    fragment_cmd->add_option("--n", n, "vertex count")->required();
    fragment_cmd->add_option("--model", model, "cayley|gw");
    fragment_cmd->add_option("--law", law_text, "offspring law for gw");
    fragment_cmd->add_option("--sigma", sigma, "arrival intensity scale, or 'auto'");
    fragment_cmd->add_option("--count", count, "replicates");
    fragment_cmd->add_option("--emit", emit, "kappa|trace|that");

    auto* excursion_cmd = app.add_subcommand("excursion", "lattice-path exports");
    excursion_cmd->fallthrough();
    excursion_cmd->add_option("--n", n, "vertex count")->required();
    excursion_cmd->add_option("--count", count, "replicates");
    excursion_cmd->add_option("--emit", emit, "path|marks");

    auto* oracle_cmd = app.add_subcommand("oracle", "exact small-n identity checks");
    oracle_cmd->fallthrough();
    oracle_cmd->add_option("--check", check, "key|forest|reverse|kcoup|records|reorder|attach")
        ->required();
    oracle_cmd->add_option("--n", n, "vertex count")->required();
    oracle_cmd->add_option("--k", k, "number of targets");

    auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo limit-law checks");
    verify_cmd->fallthrough();
    verify_cmd->add_option("--claim", claim, "kcoup|rayleigh|gw|chik")->required();
    verify_cmd->add_option("--n", n, "vertex count")->required();
    verify_cmd->add_option("--k", k, "number of targets");
    verify_cmd->add_option("--count", count, "replicates");
    verify_cmd->add_option("--law", law_text, "offspring law for gw");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::string command_line = join_args(argc, argv);
    try {
        if (sample_cmd->parsed()) return run_sample(g, command_line, model, law_text, n, count);
        if (cut_cmd->parsed()) return run_cut(g, command_line, mode, n, k, count);
        if (dynamics_cmd->parsed()) return run_dynamics(g, command_line, emit, n, count);
        if (fragment_cmd->parsed())
            return run_fragment(g, command_line, model, law_text, sigma, emit, n, count);
        if (excursion_cmd->parsed()) return run_excursion(g, command_line, emit, n, count);
        if (oracle_cmd->parsed()) return run_oracle(check, n, k);
        if (verify_cmd->parsed()) return run_verify(g, command_line, claim, law_text, n, k, count);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
