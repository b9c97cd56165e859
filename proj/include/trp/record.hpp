#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "trp/encode.hpp"
#include "trp/square.hpp"

namespace trp {

using nlohmann::json;

enum class Outcome : std::uint8_t { sat, unsat, timeout, error };

[[nodiscard]] inline std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::sat: return "sat";
        case Outcome::unsat: return "unsat";
        case Outcome::timeout: return "timeout";
        default: return "error";
    }
}

[[nodiscard]] inline Outcome outcome_from_string(const std::string& s) {
    if (s == "sat") return Outcome::sat;
    if (s == "unsat") return Outcome::unsat;
    if (s == "timeout") return Outcome::timeout;
    if (s == "error") return Outcome::error;
    throw std::invalid_argument("unknown outcome: " + s);
}

/// Per-pair statistics in the style of the results tables.  omega1_ok /
/// omega2_ok are recomputed compatibility flags, independent of which
/// flag the solver set in the model.
struct PairStats {
    long transversals_p = 0;
    long transversals_q = 0;
    long mates_p = 0;
    long mates_q = 0;
    int mate_cap = 0;  // >0 when mate counting stopped at this many
    long common = 0;
    bool omega1_ok = false;
    bool omega2_ok = false;
    std::string certificate;  // hex canonical certificate of the pair

    friend bool operator==(const PairStats&, const PairStats&) = default;
};

/// One line of the solve log.
struct SolveRecord {
    std::string case_id;
    std::string omega_tag = "either";
    std::uint64_t seed = 0;
    Outcome outcome = Outcome::error;
    double wall_seconds = 0.0;
    std::optional<Square> p, q;
    bool omega1_used = false;  // flags decoded from the model
    bool omega2_used = false;
    bool verified = false;
    std::string verdict;  // empty until a model was checked
    std::optional<PairStats> stats;
    std::string error;  // captured solver output on failures

    friend bool operator==(const SolveRecord&, const SolveRecord&) = default;
};

[[nodiscard]] inline json stats_to_json(const PairStats& s) {
    return json{{"transversals_p", s.transversals_p},
                {"transversals_q", s.transversals_q},
                {"mates_p", s.mates_p},
                {"mates_q", s.mates_q},
                {"mate_cap", s.mate_cap},
                {"common", s.common},
                {"omega1_ok", s.omega1_ok},
                {"omega2_ok", s.omega2_ok},
                {"certificate", s.certificate}};
}

[[nodiscard]] inline PairStats stats_from_json(const json& j) {
    PairStats s;
    s.transversals_p = j.at("transversals_p").get<long>();
    s.transversals_q = j.at("transversals_q").get<long>();
    s.mates_p = j.at("mates_p").get<long>();
    s.mates_q = j.at("mates_q").get<long>();
    s.mate_cap = j.at("mate_cap").get<int>();
    s.common = j.at("common").get<long>();
    s.omega1_ok = j.at("omega1_ok").get<bool>();
    s.omega2_ok = j.at("omega2_ok").get<bool>();
    s.certificate = j.at("certificate").get<std::string>();
    return s;
}

[[nodiscard]] inline json record_to_json(const SolveRecord& r) {
    json j{{"case", r.case_id},        {"omega", r.omega_tag},
           {"seed", r.seed},           {"outcome", to_string(r.outcome)},
           {"wall_seconds", r.wall_seconds}};
    if (r.p)
        j["p"] = to_text(*r.p);
    if (r.q)
        j["q"] = to_text(*r.q);
    if (r.p || r.q) {
        j["omega1_used"] = r.omega1_used;
        j["omega2_used"] = r.omega2_used;
    }
    if (!r.verdict.empty()) {
        j["verified"] = r.verified;
        j["verdict"] = r.verdict;
    }
    if (r.stats)
        j["stats"] = stats_to_json(*r.stats);
    if (!r.error.empty())
        j["error"] = r.error;
    return j;
}

[[nodiscard]] inline SolveRecord record_from_json(const json& j) {
    SolveRecord r;
    r.case_id = j.at("case").get<std::string>();
    r.omega_tag = j.at("omega").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.outcome = outcome_from_string(j.at("outcome").get<std::string>());
    r.wall_seconds = j.at("wall_seconds").get<double>();
    if (j.contains("p"))
        r.p = square_from_text(j.at("p").get<std::string>());
    if (j.contains("q"))
        r.q = square_from_text(j.at("q").get<std::string>());
    r.omega1_used = j.value("omega1_used", false);
    r.omega2_used = j.value("omega2_used", false);
    r.verified = j.value("verified", false);
    r.verdict = j.value("verdict", std::string{});
    if (j.contains("stats"))
        r.stats = stats_from_json(j.at("stats"));
    r.error = j.value("error", std::string{});
    return r;
}

/// Newline-delimited JSON: one record per line.
inline void append_record(std::ostream& out, const SolveRecord& r) {
    out << record_to_json(r).dump() << '\n';
    out.flush();
}

[[nodiscard]] inline std::vector<SolveRecord> read_records(std::istream& in) {
    std::vector<SolveRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        out.push_back(record_from_json(json::parse(line)));
    }
    return out;
}

[[nodiscard]] inline std::string to_string(BlockKind k) {
    switch (k) {
        case BlockKind::cells: return "cells";
        case BlockKind::colours: return "colours";
        default: return "flag";
    }
}

[[nodiscard]] inline BlockKind block_kind_from_string(const std::string& s) {
    if (s == "cells") return BlockKind::cells;
    if (s == "colours") return BlockKind::colours;
    if (s == "flag") return BlockKind::flag;
    throw std::invalid_argument("unknown block kind: " + s);
}

/// Sidecar JSON for a generated instance; enough to rebuild the VarMap
/// and audit the clause families.
[[nodiscard]] inline json manifest_to_json(const Manifest& m) {
    json blocks = json::array();
    for (const VarBlock& b : m.blocks)
        blocks.push_back({{"name", b.name},
                          {"kind", to_string(b.kind)},
                          {"first", b.first},
                          {"count", b.count}});
    json families = json::array();
    for (const FamilyCount& f : m.families)
        families.push_back({{"name", f.name}, {"clauses", f.clauses}});
    return json{{"kind", m.kind},
                {"order", m.order},
                {"case", m.case_id},
                {"subsquare", m.subsquare},
                {"latin", m.latin},
                {"redundant", m.redundant},
                {"symmetry", m.symmetry},
                {"optional", m.optional},
                {"consistency", m.consistency},
                {"blocks", blocks},
                {"families", families},
                {"variables", m.variable_count},
                {"clauses", m.clause_count}};
}

[[nodiscard]] inline Manifest manifest_from_json(const json& j) {
    Manifest m;
    m.kind = j.at("kind").get<std::string>();
    m.order = j.at("order").get<int>();
    m.case_id = j.at("case").get<std::string>();
    m.subsquare = j.at("subsquare").get<std::string>();
    m.latin = j.at("latin").get<std::string>();
    m.redundant = j.at("redundant").get<bool>();
    m.symmetry = j.at("symmetry").get<bool>();
    m.optional = j.at("optional").get<bool>();
    m.consistency = j.at("consistency").get<bool>();
    for (const json& b : j.at("blocks"))
        m.blocks.push_back(VarBlock{b.at("name").get<std::string>(),
                                    block_kind_from_string(b.at("kind").get<std::string>()),
                                    b.at("first").get<int>(), b.at("count").get<int>()});
    for (const json& f : j.at("families"))
        m.families.push_back(
            FamilyCount{f.at("name").get<std::string>(), f.at("clauses").get<long>()});
    m.variable_count = j.at("variables").get<int>();
    m.clause_count = j.at("clauses").get<long>();
    return m;
}

}  // namespace trp
