// Command-line driver: encode, solve, verify, extend, stats, canon, report.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "trp/equivalence.hpp"
#include "trp/harness.hpp"

namespace fs = std::filesystem;
using namespace trp;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_fail = 1;
constexpr int exit_sat = 10;
constexpr int exit_unsat = 20;
constexpr int exit_timeout = 30;

SubsquareMode parse_omega(const std::string& s) {
    if (s == "1")
        return SubsquareMode::omega1_only;
    if (s == "2")
        return SubsquareMode::omega2_only;
    if (s == "either")
        return SubsquareMode::either;
    throw CLI::ValidationError("--omega", "expected 1, 2 or either");
}

LatinEncoding parse_latin(const std::string& s) {
    if (s == "pairwise")
        return LatinEncoding::pairwise;
    if (s == "totalizer")
        return LatinEncoding::totalizer;
    throw CLI::ValidationError("--latin", "expected pairwise or totalizer");
}

/// A pair file is either one JSON solve record or plain text: two squares
/// in the order/rows format, whitespace separated.
std::pair<Square, Square> load_pair(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        throw std::runtime_error(path + " is empty");
    if (text[first] == '{') {
        const SolveRecord r = record_from_json(json::parse(text));
        if (!r.p || !r.q)
            throw std::runtime_error(path + " carries no (P, Q) squares");
        return {*r.p, *r.q};
    }
    std::istringstream squares(text);
    Square p = square_from_text(squares);
    Square q = square_from_text(squares);
    return {p, q};
}

int outcome_exit(Outcome o) {
    switch (o) {
        case Outcome::sat: return exit_sat;
        case Outcome::unsat: return exit_unsat;
        case Outcome::timeout: return exit_timeout;
        default: return exit_fail;
    }
}

int run_encode(const std::string& case_id, const std::string& omega,
               const std::string& latin, bool no_redundant, bool no_symmetry,
               const std::string& out_path) {
    EncodeOptions opts;
    opts.pair_case = pair_case_from_id(case_id);
    opts.subsquare = parse_omega(omega);
    opts.latin_encoding = parse_latin(latin);
    opts.redundant_trp_clauses = !no_redundant;
    opts.symmetry_breaking = !no_symmetry;
    const EncodedInstance inst = encode_case(opts);
    std::ofstream out(out_path);
    if (!out)
        throw std::runtime_error("cannot write " + out_path);
    write_dimacs(out, inst.formula, inst.manifest.comment_lines());
    std::ofstream manifest(out_path + ".json");
    manifest << manifest_to_json(inst.manifest).dump(2) << '\n';
    std::fprintf(stderr, "%s: %d variables, %ld clauses (manifest %s.json)\n",
                 out_path.c_str(), inst.formula.variable_count(),
                 inst.formula.clause_count(), out_path.c_str());
    return exit_ok;
}

int run_solve(const std::string& case_id, bool all_cases, int seeds, double timeout,
              int workers, const std::string& solver_cmd, const std::string& omega,
              const std::string& latin, const std::string& work_dir,
              const std::string& log_path) {
    PortfolioConfig cfg;
    cfg.solver_command = solver_cmd;  // empty -> discover_solver() inside
    cfg.timeout_seconds = timeout;
    cfg.workers = workers;
    cfg.subsquare = parse_omega(omega);
    cfg.latin = parse_latin(latin);
    cfg.work_dir = work_dir;
    cfg.seeds.clear();
    for (int s = 1; s <= seeds; ++s)
        cfg.seeds.push_back(static_cast<std::uint64_t>(s));

    fs::create_directories(work_dir);
    std::ofstream log(log_path, std::ios::app);
    if (!log)
        throw std::runtime_error("cannot write " + log_path);
    std::mutex emit;
    cfg.on_record = [&](const SolveRecord& r) {
        std::lock_guard<std::mutex> lock(emit);
        append_record(log, r);
        std::fprintf(stderr, "%s seed=%llu %s %.1fs%s\n", r.case_id.c_str(),
                     static_cast<unsigned long long>(r.seed), to_string(r.outcome).c_str(),
                     r.wall_seconds, r.verified ? " verified" : "");
    };

    std::vector<std::string> ids;
    if (all_cases)
        for (const PairCase& pc : all_pair_cases())
            ids.push_back(pc.id());
    else
        ids.push_back(case_id);

    bool any_sat = false, any_timeout = false, any_error = false, all_unsat = true;
    for (const std::string& id : ids) {
        const std::vector<SolveRecord> records = run_case_portfolio(id, cfg);
        for (const SolveRecord& r : records) {
            any_sat |= r.outcome == Outcome::sat && r.verified;
            any_timeout |= r.outcome == Outcome::timeout;
            any_error |= r.outcome == Outcome::error;
            all_unsat &= r.outcome == Outcome::unsat;
        }
    }
    if (all_cases)
        return any_error ? exit_fail : exit_ok;
    if (any_sat)
        return exit_sat;
    if (all_unsat)
        return exit_unsat;
    if (any_timeout)
        return exit_timeout;
    return exit_fail;
}

int run_verify(const std::string& path) {
    const auto [p, q] = load_pair(path);
    const Verdict v = verify_pair(p, q);
    for (const auto& [name, ok, detail] : v.checks)
        std::printf("%-18s %s%s%s\n", name.c_str(), ok ? "ok" : "FAIL",
                    detail.empty() ? "" : ": ", detail.c_str());
    std::printf("%s\n", v.summary().c_str());
    return v.passed() ? exit_ok : exit_fail;
}

int run_extend(const std::string& path, const std::string& solver_cmd, double timeout,
               const std::string& work_dir) {
    const auto [p, q] = load_pair(path);
    const std::string command = solver_cmd.empty() ? discover_solver() : solver_cmd;
    fs::create_directories(work_dir);
    const ExtendResult r = check_extendability(p, q, command, timeout, work_dir);
    std::printf("%s %.2fs%s\n", to_string(r.outcome).c_str(), r.wall_seconds,
                r.detail.empty() ? "" : (" " + r.detail).c_str());
    if (r.mate)
        std::printf("%s", to_text(*r.mate).c_str());
    return outcome_exit(r.outcome);
}

int run_stats(const std::string& path, int mate_cap) {
    const auto [p, q] = load_pair(path);
    const PairStats s = compute_stats(p, q, mate_cap);
    std::printf("%s\n", stats_to_json(s).dump(2).c_str());
    return exit_ok;
}

int run_canon(const std::string& path) {
    const auto [p, q] = load_pair(path);
    std::printf("%s\n", pair_certificate(p, q).hex().c_str());
    return exit_ok;
}

int run_report(const std::string& log_path, std::string csv_path, std::string svg_path) {
    std::ifstream in(log_path);
    if (!in)
        throw std::runtime_error("cannot open " + log_path);
    const std::vector<SolveRecord> records = read_records(in);
    if (csv_path.empty())
        csv_path = log_path + ".csv";
    if (svg_path.empty())
        svg_path = log_path + ".svg";
    {
        std::ofstream csv(csv_path);
        write_report_csv(csv, aggregate_records(records));
    }
    {
        std::ofstream svg(svg_path);
        write_scatter_svg(svg, records);
    }
    std::fprintf(stderr, "%zu records -> %s, %s\n", records.size(), csv_path.c_str(),
                 svg_path.c_str());
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"order-10 transversal-pair search toolkit"};
    app.require_subcommand(1);

    std::string case_id, omega = "either", latin = "totalizer", out_path;
    bool no_redundant = false, no_symmetry = false;
    auto* encode = app.add_subcommand("encode", "write one case instance as DIMACS CNF");
    encode->add_option("--case", case_id, "pair case id, e.g. UU")->required();
    encode->add_option("--omega", omega, "subsquare mode: 1, 2 or either");
    encode->add_option("--latin", latin, "latin encoding: pairwise or totalizer");
    encode->add_flag("--no-redundant", no_redundant, "drop redundant TRP clauses");
    encode->add_flag("--no-symmetry", no_symmetry, "drop symmetry breaking");
    encode->add_option("-o,--out", out_path, "output CNF path")->required();

    bool all_cases = false;
    int seeds = 1, workers = 1, mate_cap = 32;
    double timeout = 3600.0;
    std::string solver_cmd, work_dir = ".", log_path, pair_path;
    auto* solve = app.add_subcommand("solve", "run the solver portfolio on cases");
    solve->add_option("--case", case_id, "pair case id, e.g. UU");
    solve->add_flag("--all", all_cases, "run every pair case");
    solve->add_option("--seeds", seeds, "number of seeds (1..N)");
    solve->add_option("--timeout", timeout, "per-attempt timeout in seconds");
    solve->add_option("--workers", workers, "parallel solver processes");
    solve->add_option("--solver-cmd", solver_cmd,
                      "solver template, {cnf} and optional {seed} placeholders"
                      " (default: $TRPTOOL_SOLVER or PATH scan)");
    solve->add_option("--omega", omega, "subsquare mode: 1, 2 or either");
    solve->add_option("--latin", latin, "latin encoding: pairwise or totalizer");
    solve->add_option("--workdir", work_dir, "where instances and models go");
    solve->add_option("--log", log_path, "NDJSON record log (default workdir/records.ndjson)");
    solve->callback([&] {
        if (!all_cases && case_id.empty())
            throw CLI::ValidationError("solve", "need --case or --all");
    });

    auto* verify = app.add_subcommand("verify", "check a pair file from first principles");
    verify->add_option("pairfile", pair_path, "JSON record or two-square text")->required();

    auto* extend = app.add_subcommand("extend", "solve the common-mate extension instance");
    extend->add_option("pairfile", pair_path, "JSON record or two-square text")->required();
    extend->add_option("--solver-cmd", solver_cmd, "solver template");
    extend->add_option("--timeout", timeout, "timeout in seconds");
    extend->add_option("--workdir", work_dir, "where the instance goes");

    auto* stats = app.add_subcommand("stats", "transversal statistics of a pair");
    stats->add_option("pairfile", pair_path, "JSON record or two-square text")->required();
    stats->add_option("--mate-cap", mate_cap, "stop mate counting at this many");

    auto* canon = app.add_subcommand("canon", "canonical certificate of a pair");
    canon->add_option("pairfile", pair_path, "JSON record or two-square text")->required();

    std::string csv_path, svg_path;
    auto* report = app.add_subcommand("report", "aggregate a record log to CSV and SVG");
    report->add_option("log", log_path, "NDJSON record log")->required();
    report->add_option("--csv", csv_path, "CSV output (default <log>.csv)");
    report->add_option("--svg", svg_path, "SVG output (default <log>.svg)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (encode->parsed())
            return run_encode(case_id, omega, latin, no_redundant, no_symmetry, out_path);
        if (solve->parsed()) {
            if (log_path.empty())
                log_path = (fs::path(work_dir) / "records.ndjson").string();
            return run_solve(case_id, all_cases, seeds, timeout, workers, solver_cmd,
                             omega, latin, work_dir, log_path);
        }
        if (verify->parsed())
            return run_verify(pair_path);
        if (extend->parsed())
            return run_extend(pair_path, solver_cmd, timeout, work_dir);
        if (stats->parsed())
            return run_stats(pair_path, mate_cap);
        if (canon->parsed())
            return run_canon(pair_path);
        if (report->parsed())
            return run_report(log_path, csv_path, svg_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "trptool: %s\n", e.what());
        return exit_fail;
    }
    return exit_fail;
}
