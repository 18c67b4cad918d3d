// Command-line front end: exact oracles, seeded Monte-Carlo simulation,
// scaling sweeps and the named verification suites, with CSV output.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idc/errors.hpp"
#include "idc/monte_carlo.hpp"
#include "idc/oracles.hpp"
#include "idc/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kSeedEnvVar = "IDCOLLIDE_SEED";

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        out.push_back(std::stoull(text.substr(pos, comma - pos), nullptr, 0));
        pos = comma + 1;
    }
    return out;
}

// Seeds are never taken from the wall clock: a run is reproducible from its
// command line (plus IDCOLLIDE_SEED when the flag is omitted).
std::uint64_t require_seed(const std::optional<std::uint64_t>& flag_seed) {
    if (flag_seed) return *flag_seed;
    if (const char* env = std::getenv(kSeedEnvVar)) return std::stoull(env, nullptr, 0);
    throw CLI::ValidationError("seed", std::string("--seed or ") + kSeedEnvVar + " is required");
}

struct CsvSink {
    std::ostream* out = &std::cout;
    std::ofstream file;

    void open(const std::string& path, const std::string& header) {
        if (path.empty()) {
            *out << header << "\n";
            return;
        }
        bool write_header = true;
        {
            std::ifstream probe(path, std::ios::ate | std::ios::binary);
            write_header = !probe || probe.tellg() == 0;
        }
        file.open(path, std::ios::app);
        if (!file) throw CLI::ValidationError("out", "cannot open '" + path + "'");
        out = &file;
        if (write_header) *out << header << "\n";
    }

    void row(const std::string& line) { *out << line << "\n"; }
};

constexpr const char* kCsvHeader = "algorithm,m,n,d,profile,adversary,trials,p_hat,ci_low,ci_high,seed";

std::string estimate_row(const idc::AlgorithmKind& kind, std::uint64_t m,
                         const idc::DemandProfile& profile, const std::string& adversary,
                         const idc::Estimate& est) {
    std::string row;
    row += csv_escape(kind.to_string());
    row += ',' + std::to_string(m);
    row += ',' + std::to_string(profile.size());
    row += ',' + std::to_string(profile.l1_norm());
    row += ',' + csv_escape(profile.to_string());
    row += ',' + csv_escape(adversary);
    row += ',' + std::to_string(est.trials);
    row += ',' + format_double(est.p_hat);
    row += ',' + format_double(est.ci_low);
    row += ',' + format_double(est.ci_high);
    row += ',' + std::to_string(est.master_seed);
    return row;
}

idc::DemandProfile profile_of(const idc::AdversaryKind& adversary) {
    if (const auto* oblivious = std::get_if<idc::Oblivious>(&adversary)) return oblivious->profile;
    if (const auto* killer = std::get_if<idc::ClusterKiller>(&adversary)) {
        std::vector<std::uint64_t> entries{killer->d - killer->n + 1};
        entries.insert(entries.end(), static_cast<std::size_t>(killer->n - 1), 1);
        return idc::DemandProfile(entries);
    }
    if (const auto* fol = std::get_if<idc::SemiAdaptiveFollower>(&adversary))
        return fol->sequence.profiles().back();
    return {};
}

void log_invocation(const std::string& command, std::uint64_t seed, const std::string& config) {
    std::cerr << "# idcollide " << kVersion << " cmd=" << command << " seed=" << seed
              << " config_hash=" << std::hex << fnv1a64(config) << std::dec << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uncoordinated unique-ID generation: collision-probability toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI/TOML file (flags take precedence)");

    std::string full_config;
    for (int i = 1; i < argc; ++i) {
        full_config += argv[i];
        full_config += ' ';
    }

    // ---- exact ---------------------------------------------------------
    auto* exact = app.add_subcommand("exact", "print an exact collision probability");
    std::string oracle;
    std::string profile_text, p_text, kind_text = "random";
    std::uint64_t exact_m = 0, exact_k = 1, exact_i = 1, exact_j = 1, exact_n = 2, exact_h = 1;
    std::uint32_t exact_chunks = 0;
    exact->add_option("oracle", oracle, "one of: cluster, random, bins, bins-star, p-star-uniform, p-star-two, balls, brute")
        ->required()
        ->check(CLI::IsMember({"cluster", "random", "bins", "bins-star", "p-star-uniform",
                               "p-star-two", "balls", "brute"}));
    exact->add_option("--profile", profile_text, "demand profile, e.g. 9,5,4,42");
    exact->add_option("--m", exact_m, "universe size");
    exact->add_option("--k", exact_k, "bin size for bins");
    exact->add_option("--chunks", exact_chunks, "chunk count override for bins-star");
    exact->add_option("--i", exact_i, "first demand for p-star-two");
    exact->add_option("--j", exact_j, "second demand for p-star-two");
    exact->add_option("--n", exact_n, "instance count for p-star-uniform / ball count for balls");
    exact->add_option("--h", exact_h, "per-instance demand for p-star-uniform");
    exact->add_option("--p", p_text, "comma-separated bin probabilities for balls, e.g. 0.5,0.3,0.2");
    exact->add_option("--kind", kind_text, "algorithm for brute (random, cluster, bins:k, cluster*, bins*)");

    exact->callback([&]() {
        idc::Rational result;
        if (oracle == "cluster") {
            idc::DemandProfile profile = idc::DemandProfile::parse(profile_text);
            if (profile.size() == 1) {
                result = 0;
            } else if (profile.size() == 2 &&
                       profile.entries()[0] + profile.entries()[1] - 1 <= exact_m) {
                result = idc::cluster_pairwise(profile.entries()[0], profile.entries()[1], exact_m);
            } else {
                result = idc::cluster_exact(profile, exact_m);
            }
        } else if (oracle == "random") {
            result = idc::random_exact(idc::DemandProfile::parse(profile_text), exact_m);
        } else if (oracle == "bins") {
            result = idc::bins_exact(idc::DemandProfile::parse(profile_text), exact_k, exact_m);
        } else if (oracle == "bins-star") {
            idc::ChunkGeometry geometry = exact_chunks == 0
                                              ? idc::ChunkGeometry::for_universe(exact_m)
                                              : idc::ChunkGeometry::with_chunks(exact_chunks, exact_m);
            result = idc::bins_star_exact(idc::DemandProfile::parse(profile_text), geometry);
        } else if (oracle == "p-star-uniform") {
            result = idc::p_star_uniform(exact_n, exact_h, exact_m);
        } else if (oracle == "p-star-two") {
            result = idc::p_star_two_construction(exact_i, exact_j, exact_m);
        } else if (oracle == "balls") {
            std::vector<idc::Rational> p;
            std::size_t pos = 0;
            while (pos < p_text.size()) {
                std::size_t comma = p_text.find(',', pos);
                if (comma == std::string::npos) comma = p_text.size();
                p.push_back(idc::parse_rational(p_text.substr(pos, comma - pos)));
                pos = comma + 1;
            }
            result = idc::balls_success_prob(p, exact_n);
        } else {  // brute
            result = idc::brute_force_collision(idc::AlgorithmKind::parse(kind_text),
                                                idc::DemandProfile::parse(profile_text), exact_m);
        }
        std::cout << result.get_str() << " " << idc::decimal_string(result) << "\n";
    });

    // ---- simulate ------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo collision estimates as CSV rows");
    std::string sim_kinds = "cluster", sim_ms, sim_adversary, sim_out;
    std::uint64_t sim_trials = 0;
    std::optional<std::uint64_t> sim_seed;
    unsigned sim_threads = 0;
    simulate->add_option("--kind", sim_kinds, "algorithm kinds, comma-separated")->required();
    simulate->add_option("--m", sim_ms, "universe sizes, comma-separated")->required();
    simulate->add_option("--adversary", sim_adversary,
                         "oblivious:<profile>[:rr] | killer:n=..,d=..[,rr] | fol:<file>")
        ->required();
    simulate->add_option("--trials", sim_trials, "trial count")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim_seed, "master seed (else IDCOLLIDE_SEED)");
    simulate->add_option("--threads", sim_threads, "worker threads (0 = hardware)");
    simulate->add_option("--out", sim_out, "append CSV to this file instead of stdout");

    simulate->callback([&]() {
        std::uint64_t seed = require_seed(sim_seed);
        log_invocation("simulate", seed, full_config);
        idc::AdversaryKind adversary = idc::parse_adversary(sim_adversary);
        CsvSink sink;
        sink.open(sim_out, kCsvHeader);
        for (const auto& kind_name : [&] {
                 std::vector<std::string> kinds;
                 std::size_t pos = 0;
                 while (pos < sim_kinds.size()) {
                     std::size_t comma = sim_kinds.find(',', pos);
                     if (comma == std::string::npos) comma = sim_kinds.size();
                     kinds.push_back(sim_kinds.substr(pos, comma - pos));
                     pos = comma + 1;
                 }
                 return kinds;
             }()) {
            idc::AlgorithmKind kind = idc::AlgorithmKind::parse(kind_name);
            for (std::uint64_t m : parse_u64_list(sim_ms)) {
                idc::Estimate est =
                    idc::estimate_collision(kind, m, adversary, sim_trials, seed, sim_threads);
                sink.row(estimate_row(kind, m, profile_of(adversary), sim_adversary, est));
            }
        }
    });

    // ---- sweep ---------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "scaling sweep with a log-log fit summary");
    std::string sweep_family, sweep_points, sweep_out;
    std::uint64_t sweep_m = 0, sweep_per_instance = 4, sweep_trials = 0;
    std::optional<std::uint64_t> sweep_seed;
    unsigned sweep_threads = 0;
    sweep->add_option("--family", sweep_family, "cluster-nd (vary n) or random-d2 (vary d)")
        ->required()
        ->check(CLI::IsMember({"cluster-nd", "random-d2"}));
    sweep->add_option("--m", sweep_m, "universe size")->required()->check(CLI::PositiveNumber);
    sweep->add_option("--points", sweep_points, "grid values: n list (cluster-nd) or d list (random-d2)")
        ->required();
    sweep->add_option("--per-instance", sweep_per_instance,
                      "per-instance demand for cluster-nd (d = n * per-instance)");
    sweep->add_option("--trials", sweep_trials, "trial count per point")
        ->required()
        ->check(CLI::PositiveNumber);
    sweep->add_option("--seed", sweep_seed, "master seed (else IDCOLLIDE_SEED)");
    sweep->add_option("--threads", sweep_threads, "worker threads (0 = hardware)");
    sweep->add_option("--out", sweep_out, "append CSV to this file instead of stdout");

    sweep->callback([&]() {
        std::uint64_t seed = require_seed(sweep_seed);
        log_invocation("sweep", seed, full_config);
        std::vector<std::uint64_t> grid = parse_u64_list(sweep_points);
        if (grid.empty()) throw CLI::ValidationError("points", "empty grid");
        CsvSink sink;
        sink.open(sweep_out, kCsvHeader);
        std::vector<std::pair<double, double>> points;
        for (std::size_t cell = 0; cell < grid.size(); ++cell) {
            idc::AlgorithmKind kind;
            idc::DemandProfile profile;
            double predictor = 0.0;
            if (sweep_family == "cluster-nd") {
                std::uint64_t n = grid[cell];
                kind = idc::AlgorithmKind::cluster();
                profile = idc::DemandProfile(std::vector<std::uint64_t>(n, sweep_per_instance));
                predictor = static_cast<double>(n) * static_cast<double>(profile.l1_norm()) /
                            static_cast<double>(sweep_m);
            } else {
                std::uint64_t d = grid[cell];
                if (d % 2 != 0 || d == 0)
                    throw CLI::ValidationError("points", "random-d2 needs even positive d");
                kind = idc::AlgorithmKind::random();
                profile = idc::DemandProfile({d / 2, d / 2});
                predictor = (static_cast<double>(d) * static_cast<double>(d) -
                             static_cast<double>(profile.l2_norm_sq())) /
                            static_cast<double>(sweep_m);
            }
            idc::Estimate est = idc::estimate_collision(kind, sweep_m, idc::Oblivious{profile, {}},
                                                        sweep_trials, idc::mix64(seed, cell),
                                                        sweep_threads);
            std::string adversary = "oblivious:" + profile.to_string();
            sink.row(estimate_row(kind, sweep_m, profile, adversary, est));
            points.emplace_back(predictor, est.p_hat);
        }
        idc::ScalingFit fit = idc::fit_scaling(points);  // refuses clamped or zero estimates
        std::string summary = "# summary: slope=" + format_double(fit.slope) +
                              " ratio_min=" + format_double(fit.ratio_min) +
                              " ratio_max=" + format_double(fit.ratio_max);
        sink.row(summary);
        if (!sweep_out.empty()) std::cout << summary << "\n";
    });

    // ---- verify --------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run verification suites A1..A9");
    std::string suite;
    std::optional<std::uint64_t> verify_seed;
    unsigned verify_threads = 0;
    verify->add_option("suite", suite, "A1..A9 or all")->required();
    verify->add_option("--seed", verify_seed, "master seed (else IDCOLLIDE_SEED)");
    verify->add_option("--threads", verify_threads, "worker threads (0 = hardware)");

    bool verify_failed = false;
    verify->callback([&]() {
        std::uint64_t seed = require_seed(verify_seed);
        log_invocation("verify", seed, full_config);
        std::vector<idc::CriterionOutcome> outcomes;
        if (suite == "all") {
            outcomes = idc::run_all_criteria(seed, verify_threads);
        } else {
            bool known = false;
            for (const auto& name : idc::criterion_names()) known |= name == suite;
            if (!known) throw CLI::ValidationError("suite", "unknown suite '" + suite + "'");
            outcomes.push_back(idc::run_criterion(suite, seed, verify_threads));
        }
        for (const auto& outcome : outcomes) {
            std::cout << outcome.name << (outcome.passed ? " PASS  " : " FAIL  ") << outcome.details
                      << "\n";
            verify_failed |= !outcome.passed;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const idc::CapacityExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return verify_failed ? 1 : 0;
}
