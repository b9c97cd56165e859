#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trp/myrvold.hpp"
#include "trp/square.hpp"

namespace trp {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;  // empty on pass, reason on failure
};

struct Verdict {
    std::vector<CheckResult> checks;

    [[nodiscard]] bool passed() const {
        for (const CheckResult& c : checks)
            if (!c.passed)
                return false;
        return true;
    }

    [[nodiscard]] bool check_passed(const std::string& name) const {
        for (const CheckResult& c : checks)
            if (c.name == name)
                return c.passed;
        throw std::invalid_argument("no such check: " + name);
    }

    [[nodiscard]] std::string summary() const {
        std::string failed;
        for (const CheckResult& c : checks)
            if (!c.passed)
                failed += (failed.empty() ? "" : ", ") + c.name;
        return failed.empty() ? "ok" : "failed: " + failed;
    }
};

namespace detail {

/// body returns nullopt on pass, a reason on failure; exceptions fail too.
template <typename F>
inline void run_check(std::vector<CheckResult>& checks, std::string name, F&& body) {
    try {
        std::optional<std::string> fail = body();
        checks.push_back({std::move(name), !fail.has_value(), fail.value_or("")});
    } catch (const std::exception& e) {
        checks.push_back({std::move(name), false, e.what()});
    }
}

inline void append_pair_checks(std::vector<CheckResult>& checks, const Square& p,
                               const Square& q) {
    run_check(checks, "p-latin", [&]() -> std::optional<std::string> {
        if (!is_latin(p))
            return "p is not a latin square";
        return std::nullopt;
    });
    run_check(checks, "q-latin", [&]() -> std::optional<std::string> {
        if (!is_latin(q))
            return "q is not a latin square";
        return std::nullopt;
    });
    // Spelled out from the definition: a row of p may agree with a row of
    // q in at most one column.  With both squares column-latin this makes
    // every row of each square a transversal representative of the other.
    run_check(checks, "trp-definition", [&]() -> std::optional<std::string> {
        const int n = p.order();
        if (q.order() != n)
            return "orders differ";
        for (int i = 0; i < n; ++i)
            for (int ip = 0; ip < n; ++ip) {
                int first_hit = -1;
                for (int j = 0; j < n; ++j) {
                    if (p.at(i, j) != q.at(ip, j))
                        continue;
                    if (first_hit >= 0)
                        return "row " + std::to_string(i) + " of p meets row " +
                               std::to_string(ip) + " of q in columns " +
                               std::to_string(first_hit) + " and " + std::to_string(j);
                    first_hit = j;
                }
            }
        return std::nullopt;
    });
    // Independent route: p and q are a transversal pair iff p^-1 q is latin.
    run_check(checks, "dual-route-latin", [&]() -> std::optional<std::string> {
        if (!is_latin(compose(column_inverse(p), q)))
            return "compose(column_inverse(p), q) is not latin";
        return std::nullopt;
    });
}

}  // namespace detail

/// First-principles checks that (p, q) is a pair of latin squares where
/// each row of one represents a transversal of the other.
[[nodiscard]] inline Verdict verify_pair(const Square& p, const Square& q) {
    Verdict v;
    if (p.order() != q.order()) {
        v.checks.push_back({"same-order", false,
                            "orders " + std::to_string(p.order()) + " and " +
                                std::to_string(q.order())});
        return v;
    }
    detail::append_pair_checks(v.checks, p, q);
    return v;
}

/// Full audit of a decoded case model against the case it was solved for.
/// subsquare_mode is "either", "omega1", or "omega2"; normal_form adds the
/// symmetry-breaking checks (first-row form, in-block first-column order)
/// and should match whether the instance had them.
[[nodiscard]] inline Verdict verify_case_model(const Square& p, const Square& q,
                                               const Colouring& colour_p,
                                               const Colouring& colour_q, bool omega1_used,
                                               bool omega2_used, const PairCase& expected,
                                               const std::string& subsquare_mode,
                                               bool normal_form) {
    using detail::run_check;
    Verdict v;
    if (p.order() != 10 || q.order() != 10 || colour_p.order() != 10 || colour_q.order() != 10) {
        v.checks.push_back({"shape", false, "case models are 10x10 squares with colourings"});
        return v;
    }
    detail::append_pair_checks(v.checks, p, q);

    const std::array<std::pair<const char*, const Square*>, 2> squares = {
        {{"p", &p}, {"q", &q}}};
    const std::array<const Colouring*, 2> colourings = {&colour_p, &colour_q};
    const std::array<const SquareType*, 2> types = {&expected.first, &expected.second};

    run_check(v.checks, "whites-match-symbols", [&]() -> std::optional<std::string> {
        for (std::size_t s = 0; s < 2; ++s)
            for (int i = 0; i < 10; ++i)
                for (int j = 0; j < 10; ++j) {
                    const bool small = squares[s].second->at(i, j) < 4;
                    const bool white = colourings[s]->at(i, j) == Colour::white;
                    if (small != white)
                        return std::string(squares[s].first) + "[" + std::to_string(i) + "," +
                               std::to_string(j) + "] is " + (white ? "white" : "not white") +
                               " but holds symbol " +
                               std::to_string(squares[s].second->at(i, j));
                }
        return std::nullopt;
    });

    run_check(v.checks, "column-dark-counts", [&]() -> std::optional<std::string> {
        for (std::size_t s = 0; s < 2; ++s)
            for (int j = 0; j < 10; ++j) {
                int darks = 0;
                for (int i = 0; i < 10; ++i)
                    if (colourings[s]->at(i, j) == Colour::dark)
                        ++darks;
                const int want = j < 6 ? 2 : 0;
                if (darks != want)
                    return std::string(squares[s].first) + " column " + std::to_string(j) +
                           " has " + std::to_string(darks) + " dark cells, expected " +
                           std::to_string(want);
            }
        return std::nullopt;
    });

    run_check(v.checks, "dark-sets-match", [&]() -> std::optional<std::string> {
        for (int j = 0; j < 6; ++j) {
            std::vector<int> dark_p, dark_q;
            for (int i = 0; i < 10; ++i) {
                if (colour_p.at(i, j) == Colour::dark)
                    dark_p.push_back(p.at(i, j));
                if (colour_q.at(i, j) == Colour::dark)
                    dark_q.push_back(q.at(i, j));
            }
            std::sort(dark_p.begin(), dark_p.end());
            std::sort(dark_q.begin(), dark_q.end());
            if (dark_p != dark_q)
                return "column " + std::to_string(j) +
                       " dark symbol sets differ between p and q";
        }
        return std::nullopt;
    });

    // Rows carry their types in nondecreasing k order: counts[0] rows of
    // p1, then counts[1] of p2, and so on.
    run_check(v.checks, "row-types", [&]() -> std::optional<std::string> {
        for (std::size_t s = 0; s < 2; ++s) {
            int row = 0;
            for (int k = 1; k <= 4; ++k)
                for (int copies = 0; copies < types[s]->counts[k - 1]; ++copies, ++row) {
                    const int got = classify_row(*squares[s].second, *colourings[s], row).k;
                    if (got != k)
                        return std::string(squares[s].first) + " row " + std::to_string(row) +
                               " classifies as p" + std::to_string(got) + ", expected p" +
                               std::to_string(k);
                }
        }
        return std::nullopt;
    });

    run_check(v.checks, "case-type", [&]() -> std::optional<std::string> {
        for (std::size_t s = 0; s < 2; ++s) {
            const char got = classify_square(*squares[s].second, *colourings[s]).label;
            if (got != types[s]->label)
                return std::string(squares[s].first) + " classifies as type " + got +
                       ", expected " + types[s]->label;
        }
        return std::nullopt;
    });

    run_check(v.checks, "subsquare-compatibility", [&]() -> std::optional<std::string> {
        if (subsquare_mode != "either" && subsquare_mode != "omega1" &&
            subsquare_mode != "omega2")
            return "unknown subsquare mode: " + subsquare_mode;
        if (!omega1_used && !omega2_used)
            return "neither omega flag is set";
        if (subsquare_mode == "omega1" && !omega1_used)
            return "omega1 mode but omega1 flag unset";
        if (subsquare_mode == "omega2" && !omega2_used)
            return "omega2 mode but omega2 flag unset";
        for (std::size_t s = 0; s < 2; ++s) {
            if (omega1_used && !omega_compatible(*squares[s].second, omega1()))
                return std::string(squares[s].first) + " is not omega1-compatible";
            if (omega2_used && !omega_compatible(*squares[s].second, omega2()))
                return std::string(squares[s].first) + " is not omega2-compatible";
        }
        return std::nullopt;
    });

    if (normal_form) {
        run_check(v.checks, "first-row-normal-form", [&]() -> std::optional<std::string> {
            const std::array<int, 10> fixed = {0, -1, -1, 4, 5, 6, -1, 7, 8, 9};
            for (int j = 0; j < 10; ++j)
                if (fixed[j] >= 0 && p.at(0, j) != fixed[j])
                    return "p[0," + std::to_string(j) + "] = " + std::to_string(p.at(0, j)) +
                           ", expected " + std::to_string(fixed[j]);
            const int c = p.at(0, 6);
            if (c < 1 || c > 3)
                return "p[0,6] = " + std::to_string(c) + " is not in {1,2,3}";
            const int a = c == 1 ? 2 : 1;
            const int b = c == 3 ? 2 : 3;
            if (p.at(0, 1) != a || p.at(0, 2) != b)
                return "p[0,1..2] = (" + std::to_string(p.at(0, 1)) + "," +
                       std::to_string(p.at(0, 2)) + "), expected (" + std::to_string(a) + "," +
                       std::to_string(b) + ") for p[0,6] = " + std::to_string(c);
            return std::nullopt;
        });

        run_check(v.checks, "lex-first-symbol", [&]() -> std::optional<std::string> {
            for (std::size_t s = 0; s < 2; ++s) {
                int row = 0;
                for (int k = 1; k <= 4; ++k)
                    for (int copies = 0; copies < types[s]->counts[k - 1]; ++copies, ++row) {
                        if (copies + 1 == types[s]->counts[k - 1])
                            continue;
                        if (squares[s].second->at(row, 0) >= squares[s].second->at(row + 1, 0))
                            return std::string(squares[s].first) + " rows " +
                                   std::to_string(row) + " and " + std::to_string(row + 1) +
                                   " break the in-block first-column order";
                    }
            }
            return std::nullopt;
        });
    }
    return v;
}

}  // namespace trp
