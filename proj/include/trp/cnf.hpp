#pragma once

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace trp {

/// DIMACS literal convention: positive = variable true, negative = negated.
using Lit = int;
using Clause = std::vector<Lit>;

/// Clause database with a running variable count.  Auxiliary variables are
/// allocated through new_variable(); semantic blocks claim their range up
/// front with ensure_variables().
class CnfFormula {
public:
    [[nodiscard]] int variable_count() const { return variable_count_; }
    [[nodiscard]] long clause_count() const { return static_cast<long>(clauses_.size()); }
    [[nodiscard]] const std::vector<Clause>& clauses() const { return clauses_; }

    int new_variable() { return ++variable_count_; }

    void ensure_variables(int up_to) {
        variable_count_ = std::max(variable_count_, up_to);
    }

    void add_clause(Clause c) {
        if (c.empty())
            throw std::logic_error("refusing to emit an empty clause");
        for (std::size_t a = 0; a < c.size(); ++a) {
            if (c[a] == 0 || std::abs(c[a]) > variable_count_)
                throw std::logic_error("literal out of range: " + std::to_string(c[a]));
            for (std::size_t b = a + 1; b < c.size(); ++b)
                if (c[a] == c[b])
                    throw std::logic_error("duplicate literal in clause");
        }
        clauses_.push_back(std::move(c));
    }

    friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

private:
    int variable_count_ = 0;
    std::vector<Clause> clauses_;
};

namespace detail {

/// Totalizer tree node: output[i-1] is a variable meaning "at least i of
/// the inputs below this node are true".  Outputs are capped at `cap`
/// bits, enough to enforce any target below the cap.
inline std::vector<Lit> totalizer_node(CnfFormula& f, const std::vector<Lit>& lits,
                                       std::size_t lo, std::size_t hi, int cap) {
    if (hi - lo == 1)
        return {lits[lo]};
    const std::size_t mid = lo + (hi - lo) / 2;
    const std::vector<Lit> left = totalizer_node(f, lits, lo, mid, cap);
    const std::vector<Lit> right = totalizer_node(f, lits, mid, hi, cap);
    const int size = static_cast<int>(hi - lo);
    const int m = std::min(size, cap);
    std::vector<Lit> out(m);
    for (int s = 0; s < m; ++s)
        out[s] = f.new_variable();
    const int la = static_cast<int>(left.size());
    const int lb = static_cast<int>(right.size());
    for (int a = 0; a <= la; ++a) {
        for (int b = 0; b <= lb; ++b) {
            const int sigma = a + b;
            // (left >= a) and (right >= b) imply (node >= a+b)
            if (sigma >= 1 && sigma <= m) {
                Clause c;
                if (a >= 1)
                    c.push_back(-left[a - 1]);
                if (b >= 1)
                    c.push_back(-right[b - 1]);
                c.push_back(out[sigma - 1]);
                f.add_clause(std::move(c));
            }
            // (left <= a) and (right <= b) imply not (node >= a+b+1)
            if (sigma <= m - 1) {
                Clause c;
                if (a < la)
                    c.push_back(left[a]);
                if (b < lb)
                    c.push_back(right[b]);
                c.push_back(-out[sigma]);
                f.add_clause(std::move(c));
            }
        }
    }
    return out;
}

}  // namespace detail

/// Encodes "exactly r of lits are true" with a totalizer; models projected
/// onto lits are exactly the weight-r assignments.  The degenerate targets
/// r = 0 and r = |lits| reduce to unit clauses.
inline void encode_exactly(CnfFormula& f, const std::vector<Lit>& lits, int r) {
    const int size = static_cast<int>(lits.size());
    if (r < 0 || r > size)
        throw std::invalid_argument("cardinality target out of range");
    if (size == 0)
        return;
    if (r == 0) {
        for (Lit l : lits)
            f.add_clause({-l});
        return;
    }
    if (r == size) {
        for (Lit l : lits)
            f.add_clause({l});
        return;
    }
    const std::vector<Lit> root = detail::totalizer_node(f, lits, 0, lits.size(), r + 1);
    f.add_clause({root[r - 1]});   // at least r
    f.add_clause({-root[r]});      // not at least r+1
}

/// Pairwise (binomial) exactly-one over lits.
inline void encode_exactly_one_pairwise(CnfFormula& f, const std::vector<Lit>& lits) {
    f.add_clause(Clause(lits.begin(), lits.end()));
    for (std::size_t a = 0; a < lits.size(); ++a)
        for (std::size_t b = a + 1; b < lits.size(); ++b)
            f.add_clause({-lits[a], -lits[b]});
}

/// Standard DIMACS CNF: leading "c " comments, "p cnf V C" header, one
/// zero-terminated clause per line.
inline void write_dimacs(std::ostream& out, const CnfFormula& f,
                         const std::vector<std::string>& comments = {}) {
    for (const auto& line : comments)
        out << "c " << line << '\n';
    out << "p cnf " << f.variable_count() << ' ' << f.clause_count() << '\n';
    for (const Clause& c : f.clauses()) {
        for (Lit l : c)
            out << l << ' ';
        out << "0\n";
    }
}

/// Reference DIMACS parser (round-trip checks and instance shuffling).
/// Comments are skipped; literals must fit the declared variable count.
[[nodiscard]] inline CnfFormula parse_dimacs(std::istream& in) {
    CnfFormula f;
    std::string token;
    long declared_clauses = -1;
    while (in >> token) {
        if (token == "c") {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        if (token == "p") {
            std::string fmt;
            int vars = 0;
            if (!(in >> fmt >> vars >> declared_clauses) || fmt != "cnf")
                throw std::invalid_argument("malformed DIMACS header");
            f.ensure_variables(vars);
            continue;
        }
        if (declared_clauses < 0)
            throw std::invalid_argument("DIMACS clause data before header");
        Clause clause;
        Lit l = std::stoi(token);
        while (l != 0) {
            clause.push_back(l);
            if (!(in >> l))
                throw std::invalid_argument("unterminated DIMACS clause");
        }
        f.add_clause(std::move(clause));
    }
    if (declared_clauses >= 0 && f.clause_count() != declared_clauses)
        throw std::invalid_argument("DIMACS clause count mismatch");
    return f;
}

}  // namespace trp
