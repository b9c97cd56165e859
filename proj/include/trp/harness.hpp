#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "trp/encode.hpp"
#include "trp/equivalence.hpp"
#include "trp/myrvold.hpp"
#include "trp/record.hpp"
#include "trp/solver.hpp"
#include "trp/square.hpp"
#include "trp/verify.hpp"

namespace trp {

struct PortfolioConfig {
    std::string solver_command;  // empty: discover_solver()
    double timeout_seconds = 3600.0;
    int workers = 1;
    std::vector<std::uint64_t> seeds = {1};
    SubsquareMode subsquare = SubsquareMode::either;
    LatinEncoding latin = LatinEncoding::totalizer;
    int mate_cap = 32;  // 0 = uncapped mate counting
    std::string work_dir = ".";
    std::function<void(const SolveRecord&)> on_record;  // called serialized
};

/// Table-style statistics of a verified pair.  Mate counting stops at
/// mate_cap decompositions when the cap is positive.
[[nodiscard]] inline PairStats compute_stats(const Square& p, const Square& q, int mate_cap) {
    PairStats s;
    s.transversals_p = static_cast<long>(enumerate_transversals(p).size());
    s.transversals_q = static_cast<long>(enumerate_transversals(q).size());
    const std::optional<long> cap =
        mate_cap > 0 ? std::optional<long>(mate_cap) : std::nullopt;
    s.mates_p = count_mate_decompositions(p, cap);
    s.mates_q = count_mate_decompositions(q, cap);
    s.mate_cap = mate_cap;
    s.common = common_transversals(p, q);
    if (p.order() == 10) {
        s.omega1_ok = omega_compatible(p, omega1()) && omega_compatible(q, omega1());
        s.omega2_ok = omega_compatible(p, omega2()) && omega_compatible(q, omega2());
    }
    s.certificate = pair_certificate(p, q).hex();
    return s;
}

/// Encode one case, then run the solver once per seed (a small worker pool
/// shares the seed list).  Solvers without a {seed} placeholder get a
/// variable-shuffled copy of the instance per seed instead.  SAT models
/// are decoded, verified from first principles, and measured; every
/// attempt yields one record.
[[nodiscard]] inline std::vector<SolveRecord> run_case_portfolio(const std::string& case_id,
                                                                 const PortfolioConfig& cfg) {
    namespace fs = std::filesystem;
    const PairCase& pc = pair_case_from_id(case_id);
    EncodeOptions opts;
    opts.pair_case = pc;
    opts.subsquare = cfg.subsquare;
    opts.latin_encoding = cfg.latin;
    const EncodedInstance inst = encode_case(opts);
    const std::string tag = to_string(cfg.subsquare);
    fs::create_directories(cfg.work_dir);
    const std::string base = (fs::path(cfg.work_dir) / (case_id + "-" + tag)).string();
    {
        std::ofstream out(base + ".cnf");
        write_dimacs(out, inst.formula, inst.manifest.comment_lines());
    }
    {
        std::ofstream out(base + ".json");
        out << manifest_to_json(inst.manifest).dump(2) << '\n';
    }
    const std::string command =
        cfg.solver_command.empty() ? discover_solver() : cfg.solver_command;
    const bool seeded = command.find("{seed}") != std::string::npos;

    std::vector<SolveRecord> records(cfg.seeds.size());
    std::atomic<std::size_t> next{0};
    std::mutex emit;
    const auto work = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= cfg.seeds.size())
                return;
            const std::uint64_t seed = cfg.seeds[idx];
            SolveRecord rec;
            rec.case_id = case_id;
            rec.omega_tag = tag;
            rec.seed = seed;
            std::string cnf = base + ".cnf";
            std::vector<int> var_map;  // empty = solver saw the original numbering
            try {
                if (!seeded) {
                    ShuffledInstance sh = shuffled_instance(inst.formula, seed);
                    var_map = std::move(sh.var_map);
                    cnf = base + "-s" + std::to_string(seed) + ".cnf";
                    std::ofstream out(cnf);
                    write_dimacs(out, sh.formula, inst.manifest.comment_lines());
                }
                SolverResult res = run_solver(command, cnf, seed, cfg.timeout_seconds,
                                              inst.formula.variable_count());
                rec.outcome = res.outcome;
                rec.wall_seconds = res.wall_seconds;
                rec.error = res.output_tail;
                if (res.outcome == Outcome::sat) {
                    const Model model = var_map.empty() ? std::move(res.model)
                                                        : unshuffle_model(res.model, var_map);
                    const DecodedCase dc = decode_case_model(model, inst.varmap);
                    rec.p = dc.p;
                    rec.q = dc.q;
                    rec.omega1_used = dc.omega1_used;
                    rec.omega2_used = dc.omega2_used;
                    const Verdict v =
                        verify_case_model(dc.p, dc.q, dc.colours_p, dc.colours_q,
                                          dc.omega1_used, dc.omega2_used, pc, tag, true);
                    rec.verified = v.passed();
                    rec.verdict = v.summary();
                    if (rec.verified)
                        rec.stats = compute_stats(dc.p, dc.q, cfg.mate_cap);
                }
            } catch (const std::exception& e) {
                rec.outcome = Outcome::error;
                rec.error = e.what();
            }
            const std::lock_guard<std::mutex> lock(emit);
            records[idx] = rec;
            if (cfg.on_record)
                cfg.on_record(rec);
        }
    };
    const int workers =
        std::max(1, std::min<int>(cfg.workers, static_cast<int>(cfg.seeds.size())));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    return records;
}

struct ExtendResult {
    Outcome outcome = Outcome::error;
    double wall_seconds = 0.0;
    std::optional<Square> mate;  // verified common mate when satisfiable
    std::string detail;
};

/// Can (p, q) extend to a mutual triple?  Solves for a Latin L forming
/// transversal pairs with both; UNSAT certifies no such mate exists.
[[nodiscard]] inline ExtendResult check_extendability(const Square& p, const Square& q,
                                                      const std::string& solver_command,
                                                      double timeout_seconds,
                                                      const std::string& work_dir,
                                                      const std::string& label = "extend") {
    namespace fs = std::filesystem;
    const Verdict v = verify_pair(p, q);
    if (!v.passed())
        throw std::invalid_argument("check_extendability: " + v.summary());
    const EncodedInstance inst = encode_extension(p, q);
    fs::create_directories(work_dir);
    const std::string cnf = (fs::path(work_dir) / (label + ".cnf")).string();
    {
        std::ofstream out(cnf);
        write_dimacs(out, inst.formula, inst.manifest.comment_lines());
    }
    const std::string command =
        solver_command.empty() ? discover_solver() : solver_command;
    const SolverResult res =
        run_solver(command, cnf, 1, timeout_seconds, inst.formula.variable_count());
    ExtendResult r;
    r.outcome = res.outcome;
    r.wall_seconds = res.wall_seconds;
    r.detail = res.output_tail;
    if (res.outcome == Outcome::sat) {
        const DecodedExtension de = decode_extension_model(res.model, inst.varmap);
        if (is_latin(de.l) && is_trp(de.l, p) && is_trp(de.l, q)) {
            r.mate = de.l;
        } else {
            r.outcome = Outcome::error;
            r.detail = "decoded mate failed verification";
        }
    }
    return r;
}

/// Per case+omega rollup.  Wall statistics run over all attempts, with
/// timeouts contributing their full budget; the median of an even count
/// averages the middle two.
struct CaseAggregate {
    std::string key;  // "<case>-<omega>"
    int attempts = 0;
    int sat = 0, unsat = 0, timeouts = 0, errors = 0;
    int solved = 0;  // sat and verified
    double mean_wall = 0.0, median_wall = 0.0, min_wall = 0.0, max_wall = 0.0;
    int omega1_count = 0, omega2_count = 0;  // flag choices among solved
    long transversal_min = 0, transversal_max = 0;  // over both squares of solved pairs
    long common_min = 0, common_max = 0;
};

[[nodiscard]] inline std::vector<CaseAggregate> aggregate_records(
    const std::vector<SolveRecord>& records) {
    std::map<std::string, std::vector<const SolveRecord*>> groups;
    for (const SolveRecord& r : records)
        groups[r.case_id + "-" + r.omega_tag].push_back(&r);
    std::vector<CaseAggregate> out;
    out.reserve(groups.size());
    for (const auto& [key, group] : groups) {
        CaseAggregate a;
        a.key = key;
        std::vector<double> walls;
        walls.reserve(group.size());
        bool any_transversals = false;
        bool any_common = false;
        for (const SolveRecord* r : group) {
            ++a.attempts;
            walls.push_back(r->wall_seconds);
            switch (r->outcome) {
                case Outcome::sat:
                    ++a.sat;
                    if (r->verified) {
                        ++a.solved;
                        if (r->omega1_used)
                            ++a.omega1_count;
                        if (r->omega2_used)
                            ++a.omega2_count;
                    }
                    break;
                case Outcome::unsat: ++a.unsat; break;
                case Outcome::timeout: ++a.timeouts; break;
                case Outcome::error: ++a.errors; break;
            }
            if (r->outcome == Outcome::sat && r->verified && r->stats) {
                for (long t : {r->stats->transversals_p, r->stats->transversals_q}) {
                    a.transversal_min = any_transversals ? std::min(a.transversal_min, t) : t;
                    a.transversal_max = any_transversals ? std::max(a.transversal_max, t) : t;
                    any_transversals = true;
                }
                const long c = r->stats->common;
                a.common_min = any_common ? std::min(a.common_min, c) : c;
                a.common_max = any_common ? std::max(a.common_max, c) : c;
                any_common = true;
            }
        }
        std::sort(walls.begin(), walls.end());
        double sum = 0.0;
        for (double w : walls)
            sum += w;
        a.mean_wall = walls.empty() ? 0.0 : sum / static_cast<double>(walls.size());
        if (!walls.empty()) {
            const std::size_t mid = walls.size() / 2;
            a.median_wall = walls.size() % 2 ? walls[mid] : (walls[mid - 1] + walls[mid]) / 2.0;
            a.min_wall = walls.front();
            a.max_wall = walls.back();
        }
        out.push_back(std::move(a));
    }
    return out;
}

namespace detail {

[[nodiscard]] inline std::string fixed2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace detail

inline void write_report_csv(std::ostream& out, const std::vector<CaseAggregate>& aggregates) {
    out << "case,attempts,sat,unsat,timeout,error,solved,mean_s,median_s,min_s,max_s,"
           "omega1,omega2,transversals_min,transversals_max,common_min,common_max\n";
    for (const CaseAggregate& a : aggregates)
        out << a.key << ',' << a.attempts << ',' << a.sat << ',' << a.unsat << ','
            << a.timeouts << ',' << a.errors << ',' << a.solved << ','
            << detail::fixed2(a.mean_wall) << ',' << detail::fixed2(a.median_wall) << ','
            << detail::fixed2(a.min_wall) << ',' << detail::fixed2(a.max_wall) << ','
            << a.omega1_count << ',' << a.omega2_count << ',' << a.transversal_min << ','
            << a.transversal_max << ',' << a.common_min << ',' << a.common_max << '\n';
}

/// Wall-time scatter, one column per case+omega, one dot per attempt.
inline void write_scatter_svg(std::ostream& out, const std::vector<SolveRecord>& records) {
    struct Dot {
        std::string key;
        std::uint64_t seed;
        Outcome outcome;
        double wall;
    };
    std::vector<Dot> dots;
    dots.reserve(records.size());
    for (const SolveRecord& r : records)
        dots.push_back({r.case_id + "-" + r.omega_tag, r.seed, r.outcome, r.wall_seconds});
    std::sort(dots.begin(), dots.end(), [](const Dot& a, const Dot& b) {
        return a.key != b.key ? a.key < b.key : a.seed < b.seed;
    });
    std::vector<std::string> keys;
    for (const Dot& d : dots)
        if (keys.empty() || keys.back() != d.key)
            keys.push_back(d.key);
    double max_wall = 1.0;
    for (const Dot& d : dots)
        max_wall = std::max(max_wall, d.wall);

    const int left = 70, top = 30, column = 90, plot_h = 300, bottom = 60;
    const int width = left + column * std::max<int>(1, static_cast<int>(keys.size())) + 30;
    const int height = top + plot_h + bottom;
    const auto y_of = [&](double wall) {
        return top + plot_h - static_cast<int>(wall / max_wall * plot_h);
    };
    const auto colour_of = [](Outcome o) {
        switch (o) {
            case Outcome::sat: return "#2a9d3e";
            case Outcome::unsat: return "#3564c4";
            case Outcome::timeout: return "#d43f3f";
            default: return "#888888";
        }
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << width - 20
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double w = max_wall * tick / 4.0;
        out << "<text x=\"" << left - 8 << "\" y=\"" << y_of(w) + 4
            << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
            << detail::fixed2(w) << "</text>\n";
        out << "<line x1=\"" << left - 4 << "\" y1=\"" << y_of(w) << "\" x2=\"" << left
            << "\" y2=\"" << y_of(w) << "\" stroke=\"black\"/>\n";
    }
    out << "<text x=\"15\" y=\"" << top + plot_h / 2
        << "\" font-size=\"12\" font-family=\"sans-serif\" transform=\"rotate(-90 15 "
        << top + plot_h / 2 << ")\" text-anchor=\"middle\">wall seconds</text>\n";
    std::map<std::string, int> column_index;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        column_index[keys[i]] = static_cast<int>(i);
        const int cx = left + column * static_cast<int>(i) + column / 2;
        out << "<text x=\"" << cx << "\" y=\"" << top + plot_h + 20
            << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">"
            << keys[i] << "</text>\n";
    }
    std::map<std::string, int> dot_counter;
    for (const Dot& d : dots) {
        const int within = dot_counter[d.key]++;
        const int cx = left + column * column_index[d.key] + 18 + (within * 11) % (column - 36);
        out << "<circle cx=\"" << cx << "\" cy=\"" << y_of(d.wall)
            << "\" r=\"4\" fill=\"" << colour_of(d.outcome) << "\" fill-opacity=\"0.8\"/>\n";
    }
    const char* legend[4][2] = {{"#2a9d3e", "sat"},
                                {"#3564c4", "unsat"},
                                {"#d43f3f", "timeout"},
                                {"#888888", "error"}};
    for (int i = 0; i < 4; ++i) {
        const int lx = left + 10 + i * 90;
        const int ly = top + plot_h + 42;
        out << "<circle cx=\"" << lx << "\" cy=\"" << ly << "\" r=\"4\" fill=\"" << legend[i][0]
            << "\"/>\n";
        out << "<text x=\"" << lx + 10 << "\" y=\"" << ly + 4
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << legend[i][1]
            << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace trp
