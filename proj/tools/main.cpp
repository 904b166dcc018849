// qcc: ansatz amplitude optimization for qubit Hamiltonians from the
// command line. Subcommands mirror the library surface: rank, dha,
// optimize, fn-sweep, dress, iqcc, exact, convert.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "config_file.hpp"
#include "json.hpp"
#include "qcc/errors.hpp"
#include "qcc/iqcc.hpp"
#include "qcc/oracle.hpp"
#include "qcc/parallel.hpp"
#include "qcc/truncated.hpp"

namespace {

using qcc::cli::ConfigFile;
using ordered_json = nlohmann::ordered_json;

std::string fmt12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw qcc::ParseError("bad number in list: '" + item + "'");
        }
    }
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (double v : parse_double_list(text)) {
        if (v < 1 || v != std::floor(v))
            throw qcc::ParseError("expected positive integers: '" + text + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

struct GlobalArgs {
    std::string hamiltonian;
    std::string reference;  // msb-first bitstring; empty = |0...0>
    unsigned threads = 0;
    long seed = 0;
    std::string json_path;
    bool timings = false;
};

struct Problem {
    qcc::QubitOperator h;
    qcc::BasisState reference;
};

Problem load_problem(const GlobalArgs& args) {
    if (args.hamiltonian.empty())
        throw qcc::ContractError("--hamiltonian is required");
    qcc::QubitOperator h = qcc::load_operator(args.hamiltonian, &std::cerr);
    qcc::BasisState ref(h.n_qubits());
    if (!args.reference.empty()) {
        const qcc::BasisState parsed = qcc::BasisState::parse(args.reference);
        if (parsed.n_qubits() > h.n_qubits())
            throw qcc::ContractError("reference bitstring is wider than the Hamiltonian");
        for (std::uint32_t q = 0; q < parsed.n_qubits(); ++q)
            ref.set_bit(q, parsed.bit(q));
    }
    return {std::move(h), std::move(ref)};
}

ordered_json report_header(const char* command, const GlobalArgs& args, const Problem& problem) {
    ordered_json inputs;
    inputs["hamiltonian"] = args.hamiltonian;
    inputs["n_qubits"] = problem.h.n_qubits();
    inputs["terms"] = problem.h.size();
    inputs["reference"] = problem.reference.to_string();
    inputs["threads"] = args.threads;
    inputs["seed"] = args.seed;
    ordered_json report;
    report["command"] = command;
    report["inputs"] = std::move(inputs);
    return report;
}

void write_report(const ordered_json& report, const GlobalArgs& args) {
    if (args.json_path.empty())
        return;
    std::ofstream out(args.json_path);
    if (!out)
        throw qcc::Error(args.json_path + ": cannot open report file for writing");
    out << report.dump(2) << '\n';
}

// Ranked pool, optionally cut to the top m with the degeneracy-safe rule.
qcc::GeneratorPool ranked_pool(const Problem& problem, std::size_t m, qcc::RankingMode mode) {
    qcc::GeneratorPool pool = qcc::rank(qcc::propose_generators(problem.h, problem.reference),
                                        mode);
    if (m > 0 && m < pool.size()) {
        pool = qcc::select(pool, m);
        if (pool.size() != m)
            std::cerr << "qcc: note: selection adjusted to " << pool.size()
                      << " generators to keep a degenerate group intact\n";
    }
    return pool;
}

qcc::CompiledAnsatz compile_cached(const Problem& problem, const qcc::GeneratorPool& pool,
                                   std::uint32_t order, const std::string& cache_dir) {
    if (!cache_dir.empty()) {
        const std::string key =
            qcc::ansatz_cache_key(problem.h, pool.generators, order);
        const std::filesystem::path path =
            std::filesystem::path(cache_dir) / (key + ".qcca");
        if (std::filesystem::exists(path)) {
            std::ifstream in(path, std::ios::binary);
            return qcc::CompiledAnsatz::load(in);
        }
        qcc::CompiledAnsatz ansatz = qcc::CompiledAnsatz::compile(problem.h, pool, order);
        std::filesystem::create_directories(cache_dir);
        std::ofstream out(path, std::ios::binary);
        ansatz.save(out);
        return ansatz;
    }
    return qcc::CompiledAnsatz::compile(problem.h, pool, order);
}

struct OptimizeOutcome {
    qcc::GeneratorPool pool;
    qcc::MinimizeResult result;
    std::uint32_t order = 0;
};

OptimizeOutcome optimize_amplitudes(const Problem& problem, std::size_t m, std::uint32_t order,
                                    const qcc::MinimizeOptions& opts, bool warm_start_dha,
                                    const std::string& cache_dir) {
    qcc::GeneratorPool pool = ranked_pool(problem, m, qcc::RankingMode::gradient_ratio);
    if (pool.size() == 0)
        throw qcc::ContractError("no generators: the Hamiltonian has no flip terms");
    if (order > pool.size())
        order = static_cast<std::uint32_t>(pool.size());
    const qcc::CompiledAnsatz ansatz = compile_cached(problem, pool, order, cache_dir);
    std::vector<double> t0(pool.size(), 0.0);
    if (warm_start_dha)
        t0 = qcc::dha_solve(pool).t;
    qcc::MinimizeResult result = qcc::minimize(
        [&](std::span<const double> t, std::span<double> grad) {
            return ansatz.evaluate(t, grad).energy;
        },
        std::move(t0), opts);
    return {std::move(pool), std::move(result), order};
}

int run_rank(const GlobalArgs& args, std::size_t m, const std::string& mode_name) {
    const Problem problem = load_problem(args);
    const qcc::RankingMode mode = mode_name == "dha" ? qcc::RankingMode::dha_amplitude
                                                     : qcc::RankingMode::gradient_ratio;
    const qcc::GeneratorPool pool = ranked_pool(problem, m, mode);

    std::printf("# e0 = %s\n", fmt12(pool.e0).c_str());
    std::printf("%6s  %-24s %18s %18s %18s %18s\n", "index", "generator", "g", "E_k", "D", "r");
    ordered_json rows = ordered_json::array();
    for (std::size_t k = 0; k < pool.size(); ++k) {
        const double d = pool.e0 - pool.diag_energies[k];
        std::printf("%6zu  %-24s %18s %18s %18s %18s\n", k,
                    pool.generators[k].to_string().c_str(), fmt12(pool.grads[k]).c_str(),
                    fmt12(pool.diag_energies[k]).c_str(), fmt12(d).c_str(),
                    fmt12(pool.rankings[k]).c_str());
        ordered_json row;
        row["index"] = k;
        row["generator"] = pool.generators[k].to_string();
        row["g"] = pool.grads[k];
        row["e_k"] = pool.diag_energies[k];
        row["d"] = d;
        row["r"] = pool.rankings[k];
        rows.push_back(std::move(row));
    }
    ordered_json report = report_header("rank", args, problem);
    report["inputs"]["mode"] = mode_name;
    report["results"]["e0"] = pool.e0;
    report["results"]["generators"] = std::move(rows);
    write_report(report, args);
    return 0;
}

int run_dha(const GlobalArgs& args, std::size_t m, double tol) {
    const Problem problem = load_problem(args);
    const qcc::GeneratorPool pool = ranked_pool(problem, m, qcc::RankingMode::gradient_ratio);
    const qcc::DHASolution sol = qcc::dha_solve(pool, tol);

    std::printf("e0:         %s\n", fmt12(pool.e0).c_str());
    std::printf("energy:     %s\n", fmt12(sol.energy).c_str());
    std::printf("iterations: %zu\n", sol.iterations);
    std::printf("%6s  %-24s %18s %18s\n", "index", "generator", "c", "t");
    for (std::size_t k = 0; k < pool.size(); ++k)
        std::printf("%6zu  %-24s %18s %18s\n", k, pool.generators[k].to_string().c_str(),
                    fmt12(sol.c[k]).c_str(), fmt12(sol.t[k]).c_str());

    ordered_json report = report_header("dha", args, problem);
    report["results"]["e0"] = pool.e0;
    report["results"]["energy"] = sol.energy;
    report["results"]["iterations"] = sol.iterations;
    report["results"]["amplitudes"] = sol.t;
    write_report(report, args);
    return 0;
}

int run_optimize(const GlobalArgs& args, std::size_t m, std::uint32_t order,
                 qcc::MinimizeOptions opts, bool warm_start_dha, const std::string& cache_dir,
                 bool quiet) {
    const Problem problem = load_problem(args);
    if (!quiet)
        opts.progress = [](std::size_t eval, double energy, double grad_norm) {
            std::printf("eval %4zu  energy %-20s grad %-12s\n", eval, fmt12(energy).c_str(),
                        fmt12(grad_norm).c_str());
        };
    const OptimizeOutcome outcome =
        optimize_amplitudes(problem, m, order, opts, warm_start_dha, cache_dir);

    std::printf("converged:   %s\n", outcome.result.converged ? "yes" : "no");
    std::printf("evaluations: %zu\n", outcome.result.evals);
    std::printf("e_opt:       %s\n", fmt12(outcome.result.e_opt).c_str());
    std::printf("%6s  %-24s %18s\n", "index", "generator", "t_opt");
    for (std::size_t k = 0; k < outcome.pool.size(); ++k)
        std::printf("%6zu  %-24s %18s\n", k, outcome.pool.generators[k].to_string().c_str(),
                    fmt12(outcome.result.t_opt[k]).c_str());

    ordered_json report = report_header("optimize", args, problem);
    report["inputs"]["order"] = outcome.order;
    report["inputs"]["generators"] = outcome.pool.size();
    report["results"]["converged"] = outcome.result.converged;
    report["results"]["evaluations"] = outcome.result.evals;
    report["results"]["e_opt"] = outcome.result.e_opt;
    report["results"]["t_opt"] = outcome.result.t_opt;
    write_report(report, args);
    if (!outcome.result.converged)
        std::cerr << "qcc: warning: optimizer stopped before reaching tolerance\n";
    return 0;
}

int run_fn_sweep(const GlobalArgs& args, std::size_t m, std::uint32_t order,
                 const std::string& caps_text, const std::string& amplitudes_text,
                 const std::string& state_out) {
    const Problem problem = load_problem(args);
    const std::vector<std::size_t> caps = parse_size_list(caps_text);
    for (std::size_t i = 1; i < caps.size(); ++i)
        if (caps[i] <= caps[i - 1])
            throw qcc::ContractError("caps must be strictly ascending");

    qcc::GeneratorPool pool = ranked_pool(problem, m, qcc::RankingMode::gradient_ratio);
    std::vector<double> t;
    if (!amplitudes_text.empty()) {
        t = parse_double_list(amplitudes_text);
        if (t.size() != pool.size())
            throw qcc::ContractError("expected " + std::to_string(pool.size()) +
                                     " amplitudes, got " + std::to_string(t.size()));
    } else {
        const OptimizeOutcome outcome =
            optimize_amplitudes(problem, m, order, qcc::MinimizeOptions{}, false, "");
        pool = outcome.pool;
        t = outcome.result.t_opt;
        std::cerr << "qcc: note: amplitudes from an order-" << outcome.order
                  << " optimization (e_opt = " << fmt12(outcome.result.e_opt) << ")\n";
    }

    const std::vector<qcc::SweepRow> rows = qcc::sweep_truncated(problem.h, pool, t, caps);
    std::printf("cap,energy,final_dim,cumulative_norm_loss,seconds\n");
    for (const auto& row : rows)
        std::printf("%zu,%s,%zu,%s,%s\n", row.cap, fmt12(row.energy).c_str(), row.final_dim,
                    fmt12(row.cumulative_norm_loss).c_str(), fmt12(row.seconds).c_str());

    if (!state_out.empty()) {
        const qcc::SparseState state = qcc::truncated_state(
            pool.generators, t, pool.reference, caps.empty() ? qcc::unlimited_cap : caps.back());
        std::ofstream out(state_out);
        if (!out)
            throw qcc::Error(state_out + ": cannot open state dump for writing");
        state.dump(out);
    }

    ordered_json report = report_header("fn-sweep", args, problem);
    report["inputs"]["generators"] = pool.size();
    report["inputs"]["amplitudes"] = t;
    ordered_json jrows = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json jrow;
        jrow["cap"] = row.cap;
        jrow["energy"] = row.energy;
        jrow["final_dim"] = row.final_dim;
        jrow["cumulative_norm_loss"] = row.cumulative_norm_loss;
        if (args.timings)
            jrow["seconds"] = row.seconds;
        jrows.push_back(std::move(jrow));
    }
    report["results"]["rows"] = std::move(jrows);
    write_report(report, args);
    return 0;
}

int run_dress(const GlobalArgs& args, std::size_t m, std::uint32_t order,
              const std::string& amplitudes_text, double threshold,
              const std::string& output) {
    const Problem problem = load_problem(args);
    qcc::GeneratorPool pool = ranked_pool(problem, m, qcc::RankingMode::gradient_ratio);
    std::vector<double> t;
    double e_opt = 0.0;
    if (!amplitudes_text.empty()) {
        t = parse_double_list(amplitudes_text);
        if (t.size() != pool.size())
            throw qcc::ContractError("expected " + std::to_string(pool.size()) +
                                     " amplitudes, got " + std::to_string(t.size()));
        e_opt = qcc::CompiledAnsatz::compile(problem.h, pool, static_cast<std::uint32_t>(
                                                                  pool.size()))
                    .evaluate(t)
                    .energy;
    } else {
        const OptimizeOutcome outcome =
            optimize_amplitudes(problem, m, order, qcc::MinimizeOptions{}, false, "");
        pool = outcome.pool;
        t = outcome.result.t_opt;
        e_opt = outcome.result.e_opt;
    }

    const qcc::QubitOperator dressed = qcc::dress(problem.h, pool.generators, t);
    const double energy = qcc::matrix_element(dressed, problem.reference, problem.reference);
    const qcc::CompressResult compressed = qcc::compress(dressed, threshold);
    qcc::save_operator(compressed.op, output);

    std::printf("e_opt:            %s\n", fmt12(e_opt).c_str());
    std::printf("dressed <0|H|0>:  %s\n", fmt12(energy).c_str());
    std::printf("terms:            %zu -> %zu\n", problem.h.size(), compressed.op.size());
    std::printf("removed weight:   %s\n", fmt12(compressed.removed_weight).c_str());

    ordered_json report = report_header("dress", args, problem);
    report["inputs"]["generators"] = pool.size();
    report["inputs"]["threshold"] = threshold;
    report["inputs"]["output"] = output;
    report["results"]["e_opt"] = e_opt;
    report["results"]["energy"] = energy;
    report["results"]["terms"] = compressed.op.size();
    report["results"]["removed_weight"] = compressed.removed_weight;
    report["results"]["amplitudes"] = t;
    write_report(report, args);
    return 0;
}

int run_iqcc(const GlobalArgs& args, const ConfigFile& cfg, const std::string& snapshot_dir) {
    const Problem problem = load_problem(args);
    if (cfg.iterations.empty())
        throw qcc::ContractError("iqcc needs at least one [iteration] section in the config");

    const auto field = [](const std::map<std::string, std::string>& section,
                          const std::string& key, const std::string& fallback) {
        const auto it = section.find(key);
        return it == section.end() ? fallback : it->second;
    };

    qcc::IqccSchedule schedule;
    for (const auto& section : cfg.iterations) {
        qcc::IterationSpec spec;
        spec.generators = std::stoul(field(section, "generators", "1"));
        spec.order = static_cast<std::uint32_t>(std::stoul(field(section, "order", "1")));
        spec.drop_threshold = std::stod(field(section, "threshold", "5e-7"));
        schedule.iterations.push_back(spec);
    }
    if (cfg.sections.count("iqcc")) {
        const auto& section = cfg.sections.at("iqcc");
        schedule.max_iterations = std::stoul(field(section, "max_iterations", "0"));
        schedule.energy_tol = std::stod(field(section, "energy_tol", "0"));
    }

    std::map<std::string, qcc::QubitOperator> observables;
    if (cfg.sections.count("observables")) {
        for (const auto& [name, path] : cfg.sections.at("observables"))
            observables.emplace(name, qcc::load_operator(path, &std::cerr));
    }

    qcc::IqccOptions options;
    if (!snapshot_dir.empty()) {
        std::filesystem::create_directories(snapshot_dir);
        options.snapshot = [&](std::size_t iter, const qcc::QubitOperator& h) {
            const std::filesystem::path path = std::filesystem::path(snapshot_dir) /
                                               ("hamiltonian-" + std::to_string(iter) + ".txt");
            qcc::save_operator(h, path.string());
        };
    }
    options.on_iteration = [&](const qcc::IqccRecord& rec) {
        std::printf("iter %3zu  energy %-20s e_opt %-20s max_r %-14s terms %8zu  m %3zu  k %3u",
                    rec.iteration, fmt12(rec.energy).c_str(), fmt12(rec.e_opt).c_str(),
                    fmt12(rec.max_ranking).c_str(), rec.hamiltonian_terms, rec.m_used,
                    rec.k_used);
        for (const auto& [name, value] : rec.observable_expectations)
            std::printf("  %s %s", name.c_str(), fmt12(value).c_str());
        std::printf("  %.2fs\n", rec.wall_seconds);
    };

    const qcc::IqccTrace trace =
        qcc::run_iqcc(problem.h, problem.reference, schedule, observables, options);
    std::printf("stop: %s\n", trace.stop_reason.c_str());
    std::printf("final energy: %s\n", fmt12(trace.final_energy()).c_str());

    ordered_json report = report_header("iqcc", args, problem);
    report["inputs"]["iterations"] = schedule.total_iterations();
    report["inputs"]["energy_tol"] = schedule.energy_tol;
    ordered_json jrecords = ordered_json::array();
    for (const auto& rec : trace.records) {
        ordered_json jrec;
        jrec["iteration"] = rec.iteration;
        jrec["energy"] = rec.energy;
        jrec["e_opt"] = rec.e_opt;
        jrec["max_ranking"] = rec.max_ranking;
        jrec["hamiltonian_terms"] = rec.hamiltonian_terms;
        jrec["m"] = rec.m_used;
        jrec["k"] = rec.k_used;
        jrec["dropped_l1"] = rec.dropped_l1;
        if (!rec.observable_expectations.empty())
            jrec["observables"] = rec.observable_expectations;
        if (args.timings)
            jrec["seconds"] = rec.wall_seconds;
        jrecords.push_back(std::move(jrec));
    }
    report["results"]["records"] = std::move(jrecords);
    report["results"]["stop_reason"] = trace.stop_reason;
    report["results"]["final_energy"] = trace.final_energy();
    write_report(report, args);
    return 0;
}

int run_exact(const GlobalArgs& args, std::size_t m, const std::string& amplitudes_text) {
    const Problem problem = load_problem(args);
    const qcc::oracle::GroundState ground = qcc::oracle::dense_ground(problem.h);
    std::printf("ground energy: %s\n", fmt12(ground.energy).c_str());

    ordered_json report = report_header("exact", args, problem);
    report["results"]["ground_energy"] = ground.energy;

    if (!amplitudes_text.empty()) {
        const qcc::GeneratorPool pool =
            ranked_pool(problem, m, qcc::RankingMode::gradient_ratio);
        const std::vector<double> t = parse_double_list(amplitudes_text);
        if (t.size() != pool.size())
            throw qcc::ContractError("expected " + std::to_string(pool.size()) +
                                     " amplitudes, got " + std::to_string(t.size()));
        const double energy =
            qcc::oracle::dense_energy(problem.h, pool.generators, t, problem.reference);
        std::printf("ansatz energy: %s\n", fmt12(energy).c_str());
        report["inputs"]["generators"] = pool.size();
        report["inputs"]["amplitudes"] = t;
        report["results"]["ansatz_energy"] = energy;
    }
    write_report(report, args);
    return 0;
}

int run_convert(const GlobalArgs& args, double threshold, const std::string& output) {
    const Problem problem = load_problem(args);
    const qcc::CompressResult compressed = qcc::compress(problem.h, threshold);
    qcc::save_operator(compressed.op, output);
    std::printf("terms: %zu -> %zu\n", problem.h.size(), compressed.op.size());

    ordered_json report = report_header("convert", args, problem);
    report["inputs"]["threshold"] = threshold;
    report["inputs"]["output"] = output;
    report["results"]["terms"] = compressed.op.size();
    report["results"]["removed_weight"] = compressed.removed_weight;
    write_report(report, args);
    return 0;
}

std::string prescan_config(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc)
            return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0)
            return arg.substr(9);
    }
    return "";
}

unsigned cfg_unsigned(const ConfigFile& cfg, const std::string& key, unsigned fallback) {
    if (!cfg.has(key))
        return fallback;
    try {
        return static_cast<unsigned>(std::stoul(cfg.get(key)));
    } catch (const std::exception&) {
        throw qcc::ParseError("config key '" + key + "' is not a non-negative integer");
    }
}

double cfg_double(const ConfigFile& cfg, const std::string& key, double fallback) {
    if (!cfg.has(key))
        return fallback;
    try {
        return std::stod(cfg.get(key));
    } catch (const std::exception&) {
        throw qcc::ParseError("config key '" + key + "' is not a number");
    }
}

}  // namespace

int main(int argc, char** argv) {
    try {
        ConfigFile cfg;
        const std::string config_path = prescan_config(argc, argv);
        if (!config_path.empty())
            cfg = qcc::cli::parse_config(config_path);

        CLI::App app{"ansatz amplitude optimization for qubit Hamiltonians"};
        app.require_subcommand(1);
        app.fallthrough();

        GlobalArgs args;
        args.hamiltonian = cfg.get("hamiltonian");
        args.reference = cfg.get("reference");
        args.threads = cfg_unsigned(cfg, "threads", 0);
        args.json_path = cfg.get("json");
        std::string config_opt;  // consumed by the prescan; registered so
                                 // CLI11 accepts it anywhere
        app.add_option("--config", config_opt, "sectioned key = value configuration file");
        app.add_option("--hamiltonian", args.hamiltonian, "Hamiltonian file");
        app.add_option("--reference", args.reference, "reference occupation bitstring");
        app.add_option("--threads", args.threads, "worker thread cap (0 = hardware)");
        app.add_option("--seed", args.seed, "seed recorded in reports");
        app.add_option("--json", args.json_path, "write a JSON report here");
        app.add_flag("--timings", args.timings, "include wall-clock timings in JSON reports");

        // rank
        auto* rank_cmd = app.add_subcommand("rank", "rank candidate generators");
        std::size_t rank_m = cfg_unsigned(cfg, "generators", 0);
        std::string rank_mode = cfg.get("mode", "gradient");
        rank_cmd->add_option("--generators", rank_m, "keep only the top m generators");
        rank_cmd->add_option("--mode", rank_mode, "ranking mode: gradient or dha")
            ->check(CLI::IsMember({"gradient", "dha"}));

        // dha
        auto* dha_cmd = app.add_subcommand("dha", "diagonal-Hessian energy and amplitudes");
        std::size_t dha_m = cfg_unsigned(cfg, "generators", 0);
        double dha_tol = cfg_double(cfg, "tol", 1e-12);
        dha_cmd->add_option("--generators", dha_m, "use only the top m generators");
        dha_cmd->add_option("--tol", dha_tol, "eigenvalue iteration tolerance");

        // optimize
        auto* opt_cmd = app.add_subcommand("optimize", "minimize the order-K energy");
        std::size_t opt_m = cfg_unsigned(cfg, "generators", 0);
        std::uint32_t opt_order = cfg_unsigned(cfg, "order", 2);
        qcc::MinimizeOptions opt_opts;
        opt_opts.grad_tol = cfg_double(cfg, "grad-tol", 1e-8);
        std::size_t opt_max_evals = cfg_unsigned(cfg, "max-evals", 0);
        std::string warm_start = cfg.get("warm-start", "zero");
        std::string cache_dir = cfg.get("cache");
        bool opt_quiet = false;
        opt_cmd->add_option("--generators", opt_m, "use only the top m generators (0 = all)");
        opt_cmd->add_option("--order", opt_order, "polynomial truncation order K");
        opt_cmd->add_option("--grad-tol", opt_opts.grad_tol, "gradient convergence tolerance");
        opt_cmd->add_option("--max-evals", opt_max_evals, "evaluation cap (0 = 10M+200)");
        opt_cmd->add_option("--warm-start", warm_start, "starting amplitudes: zero or dha")
            ->check(CLI::IsMember({"zero", "dha"}));
        opt_cmd->add_option("--cache", cache_dir, "compiled-ansatz cache directory");
        opt_cmd->add_flag("--quiet", opt_quiet, "suppress per-evaluation progress lines");

        // fn-sweep
        auto* fn_cmd = app.add_subcommand("fn-sweep", "truncated-expansion energy sweep");
        std::size_t fn_m = cfg_unsigned(cfg, "generators", 0);
        std::uint32_t fn_order = cfg_unsigned(cfg, "order", 2);
        std::string fn_caps = cfg.get("caps");
        std::string fn_amplitudes = cfg.get("amplitudes");
        std::string fn_state_out = cfg.get("state-out");
        fn_cmd->add_option("--caps", fn_caps, "comma-separated ascending dimension caps")
            ->required(!cfg.has("caps"));
        fn_cmd->add_option("--generators", fn_m, "use only the top m generators (0 = all)");
        fn_cmd->add_option("--order", fn_order,
                           "order used to optimize amplitudes when none are given");
        fn_cmd->add_option("--amplitudes", fn_amplitudes, "comma-separated amplitudes");
        fn_cmd->add_option("--state-out", fn_state_out, "dump the final state to this file");

        // dress
        auto* dress_cmd = app.add_subcommand("dress", "similarity-transform the Hamiltonian");
        std::size_t dress_m = cfg_unsigned(cfg, "generators", 0);
        std::uint32_t dress_order = cfg_unsigned(cfg, "order", 2);
        std::string dress_amplitudes = cfg.get("amplitudes");
        double dress_threshold = cfg_double(cfg, "threshold", 5e-7);
        std::string dress_output = cfg.get("output");
        dress_cmd->add_option("--generators", dress_m, "use only the top m generators (0 = all)");
        dress_cmd->add_option("--order", dress_order,
                              "order used to optimize amplitudes when none are given");
        dress_cmd->add_option("--amplitudes", dress_amplitudes, "comma-separated amplitudes");
        dress_cmd->add_option("--threshold", dress_threshold, "drop terms below this magnitude");
        dress_cmd->add_option("--output", dress_output, "write the dressed Hamiltonian here")
            ->required(!cfg.has("output"));

        // iqcc
        auto* iqcc_cmd = app.add_subcommand("iqcc", "iterative optimize-dress-compress loop");
        std::string snapshot_dir = cfg.get("snapshots");
        iqcc_cmd->add_option("--snapshots", snapshot_dir,
                             "write per-iteration Hamiltonians into this directory");

        // exact
        auto* exact_cmd = app.add_subcommand("exact", "dense-oracle energies");
        std::size_t exact_m = cfg_unsigned(cfg, "generators", 0);
        std::string exact_amplitudes = cfg.get("amplitudes");
        exact_cmd->add_option("--generators", exact_m, "use only the top m generators (0 = all)");
        exact_cmd->add_option("--amplitudes", exact_amplitudes,
                              "evaluate the exact ansatz energy at these amplitudes");

        // convert
        auto* convert_cmd = app.add_subcommand("convert", "rewrite a Hamiltonian canonically");
        double convert_threshold = cfg_double(cfg, "threshold", 0.0);
        std::string convert_output = cfg.get("output");
        convert_cmd->add_option("--threshold", convert_threshold,
                                "drop terms below this magnitude");
        convert_cmd->add_option("--output", convert_output, "write the result here")
            ->required(!cfg.has("output"));

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            std::cerr << "error: usage: " << e.what() << '\n';
            return 1;
        }

        qcc::set_max_threads(args.threads);

        if (rank_cmd->parsed())
            return run_rank(args, rank_m, rank_mode);
        if (dha_cmd->parsed())
            return run_dha(args, dha_m, dha_tol);
        if (opt_cmd->parsed()) {
            opt_opts.max_evals = opt_max_evals;
            return run_optimize(args, opt_m, opt_order, opt_opts, warm_start == "dha",
                                cache_dir, opt_quiet);
        }
        if (fn_cmd->parsed())
            return run_fn_sweep(args, fn_m, fn_order, fn_caps, fn_amplitudes, fn_state_out);
        if (dress_cmd->parsed())
            return run_dress(args, dress_m, dress_order, dress_amplitudes, dress_threshold,
                             dress_output);
        if (iqcc_cmd->parsed())
            return run_iqcc(args, cfg, snapshot_dir);
        if (exact_cmd->parsed())
            return run_exact(args, exact_m, exact_amplitudes);
        if (convert_cmd->parsed())
            return run_convert(args, convert_threshold, convert_output);
        std::cerr << "error: usage: no subcommand given\n";
        return 1;
    } catch (const qcc::ParseError& e) {
        std::cerr << "error: input: " << e.what() << '\n';
        return 2;
    } catch (const qcc::CapacityError& e) {
        std::cerr << "error: input: " << e.what() << '\n';
        return 2;
    } catch (const qcc::ConvergenceError& e) {
        std::cerr << "error: numerical: " << e.what() << '\n';
        return 3;
    } catch (const qcc::NumericalError& e) {
        std::cerr << "error: numerical: " << e.what() << '\n';
        return 3;
    } catch (const qcc::Error& e) {
        std::cerr << "error: usage: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 1;
    }
}
