#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trp/cnf.hpp"
#include "trp/myrvold.hpp"
#include "trp/square.hpp"

namespace trp {

enum class LatinEncoding : std::uint8_t { pairwise, totalizer };
enum class SubsquareMode : std::uint8_t { omega1_only, omega2_only, either };
enum class TrpStyle : std::uint8_t { composition, direct };

[[nodiscard]] inline std::string to_string(LatinEncoding e) {
    return e == LatinEncoding::pairwise ? "pairwise" : "totalizer";
}

[[nodiscard]] inline std::string to_string(SubsquareMode m) {
    switch (m) {
        case SubsquareMode::omega1_only: return "omega1";
        case SubsquareMode::omega2_only: return "omega2";
        default: return "either";
    }
}

[[nodiscard]] inline LatinEncoding latin_encoding_from_string(const std::string& s) {
    if (s == "pairwise") return LatinEncoding::pairwise;
    if (s == "totalizer") return LatinEncoding::totalizer;
    throw std::invalid_argument("unknown latin encoding: " + s);
}

[[nodiscard]] inline SubsquareMode subsquare_mode_from_string(const std::string& s) {
    if (s == "omega1" || s == "1") return SubsquareMode::omega1_only;
    if (s == "omega2" || s == "2") return SubsquareMode::omega2_only;
    if (s == "either") return SubsquareMode::either;
    throw std::invalid_argument("unknown subsquare mode: " + s);
}

struct EncodeOptions {
    PairCase pair_case;
    SubsquareMode subsquare = SubsquareMode::either;
    LatinEncoding latin_encoding = LatinEncoding::totalizer;
    bool redundant_trp_clauses = true;
    bool symmetry_breaking = true;
    /// "not strictly necessary" extras: the reverse dark-transfer direction
    /// and the first-row implication P[0,1]=2 -> P[0,2]=3.
    bool optional_clauses = true;
    /// dark-colour transfer between P and Q; off only for ablation builds.
    bool colour_consistency = true;
};

enum class BlockKind : std::uint8_t { cells, colours, flag };

struct VarBlock {
    std::string name;
    BlockKind kind;
    int first;  // first variable number (1-based, inclusive)
    int count;
};

/// Deterministic variable layout: semantic blocks claim 1..semantic_count()
/// in registration order; auxiliary (cardinality) variables follow.
class VarMap {
public:
    explicit VarMap(int order) : order_(order) {
        if (order < 1 || order > Square::max_order)
            throw std::invalid_argument("variable map order out of range");
    }

    int add_cell_block(std::string name) {
        return add_block(std::move(name), BlockKind::cells, order_ * order_ * order_);
    }

    /// One variable per cell: dark for columns 0..5, white for columns 6..9.
    int add_colour_block(std::string name) {
        if (order_ != 10)
            throw std::logic_error("colour blocks exist only at order 10");
        return add_block(std::move(name), BlockKind::colours, order_ * order_);
    }

    int add_flag(std::string name) { return add_block(std::move(name), BlockKind::flag, 1); }

    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] int semantic_count() const { return next_ - 1; }
    [[nodiscard]] const std::vector<VarBlock>& blocks() const { return blocks_; }

    [[nodiscard]] int block_index(const std::string& name) const {
        for (std::size_t b = 0; b < blocks_.size(); ++b)
            if (blocks_[b].name == name)
                return static_cast<int>(b);
        throw std::invalid_argument("no variable block named " + name);
    }

    [[nodiscard]] int cell_var(int block, int i, int j, int k) const {
        const VarBlock& b = checked(block, BlockKind::cells);
        check_index(i), check_index(j), check_index(k);
        return b.first + (i * order_ + j) * order_ + k;
    }

    [[nodiscard]] int colour_var(int block, int i, int j) const {
        const VarBlock& b = checked(block, BlockKind::colours);
        check_index(i), check_index(j);
        return b.first + i * order_ + j;
    }

    [[nodiscard]] int white_var(int block, int i, int j) const {
        if (j < 6)
            throw std::logic_error("white variables exist only in columns 6..9");
        return colour_var(block, i, j);
    }

    [[nodiscard]] int dark_var(int block, int i, int j) const {
        if (j >= 6)
            throw std::logic_error("dark variables exist only in columns 0..5");
        return colour_var(block, i, j);
    }

    [[nodiscard]] int flag_var(int block) const {
        return checked(block, BlockKind::flag).first;
    }

    /// Human-readable name of a variable, for diagnostics and comments.
    [[nodiscard]] std::string describe(int var) const {
        for (const VarBlock& b : blocks_) {
            if (var < b.first || var >= b.first + b.count)
                continue;
            const int off = var - b.first;
            switch (b.kind) {
                case BlockKind::cells: {
                    const int k = off % order_;
                    const int j = off / order_ % order_;
                    const int i = off / (order_ * order_);
                    return b.name + "[" + std::to_string(i) + "," + std::to_string(j) +
                           "]=" + std::to_string(k);
                }
                case BlockKind::colours: {
                    const int j = off % order_;
                    const int i = off / order_;
                    return std::string(j < 6 ? "dark" : "white") + "(" + b.name + "," +
                           std::to_string(i) + "," + std::to_string(j) + ")";
                }
                case BlockKind::flag:
                    return b.name;
            }
        }
        return "aux" + std::to_string(var);
    }

private:
    int add_block(std::string name, BlockKind kind, int count) {
        for (const auto& b : blocks_)
            if (b.name == name)
                throw std::logic_error("duplicate variable block name: " + name);
        blocks_.push_back(VarBlock{std::move(name), kind, next_, count});
        next_ += count;
        return static_cast<int>(blocks_.size()) - 1;
    }

    [[nodiscard]] const VarBlock& checked(int block, BlockKind kind) const {
        const VarBlock& b = blocks_.at(block);
        if (b.kind != kind)
            throw std::logic_error("variable block " + b.name + " has the wrong kind");
        return b;
    }

    void check_index(int v) const {
        if (v < 0 || v >= order_)
            throw std::out_of_range("variable index out of range");
    }

    int order_;
    int next_ = 1;
    std::vector<VarBlock> blocks_;
};

struct FamilyCount {
    std::string name;
    long clauses;

    friend bool operator==(const FamilyCount&, const FamilyCount&) = default;
};

/// Everything needed to regenerate, decode, and audit one instance.
struct Manifest {
    std::string kind;      // "case", "extension", or "pair"
    int order = 10;
    std::string case_id;   // empty unless kind == "case"
    std::string subsquare; // empty unless kind == "case"
    std::string latin = "totalizer";
    bool redundant = true;
    bool symmetry = true;
    bool optional = true;
    bool consistency = true;
    std::vector<VarBlock> blocks;
    std::vector<FamilyCount> families;
    int variable_count = 0;
    long clause_count = 0;

    [[nodiscard]] std::vector<std::string> comment_lines() const {
        std::vector<std::string> out;
        std::string fp = "instance kind=" + kind + " order=" + std::to_string(order);
        if (!case_id.empty())
            fp += " case=" + case_id + " subsquare=" + subsquare;
        fp += " latin=" + latin + " redundant=" + std::to_string(redundant) +
              " symmetry=" + std::to_string(symmetry) + " optional=" + std::to_string(optional) +
              " consistency=" + std::to_string(consistency);
        out.push_back(fp);
        for (const auto& b : blocks)
            out.push_back("block " + b.name + " " + std::to_string(b.first) + " " +
                          std::to_string(b.first + b.count - 1));
        if (variable_count > semantic_count())
            out.push_back("aux " + std::to_string(semantic_count() + 1) + " " +
                          std::to_string(variable_count));
        for (const auto& f : families)
            out.push_back("family " + f.name + " " + std::to_string(f.clauses));
        return out;
    }

    [[nodiscard]] int semantic_count() const {
        int n = 0;
        for (const auto& b : blocks)
            n += b.count;
        return n;
    }
};

/// Clause emitter over a VarMap: one method per constraint family, with
/// per-family clause counts recorded for the manifest.
class InstanceBuilder {
public:
    InstanceBuilder(int order, LatinEncoding latin) : map_(order), latin_(latin) {}

    VarMap& varmap() { return map_; }
    [[nodiscard]] const VarMap& varmap() const { return map_; }
    CnfFormula& formula() { return formula_; }
    [[nodiscard]] const CnfFormula& formula() const { return formula_; }
    [[nodiscard]] const std::vector<FamilyCount>& families() const { return families_; }

    /// Reserve all semantic variables; must precede any clause emission.
    void seal_variables() { formula_.ensure_variables(map_.semantic_count()); }

    /// Exactly-one constraints along all three axes of a cell block.
    void encode_latin(int block) {
        begin("latin-" + map_.blocks()[block].name);
        const int n = map_.order();
        std::vector<Lit> group(n);
        for (int i = 0; i < n; ++i)  // one symbol per cell
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k)
                    group[k] = map_.cell_var(block, i, j, k);
                exactly_one(group);
            }
        for (int j = 0; j < n; ++j)  // each symbol once per column
            for (int k = 0; k < n; ++k) {
                for (int i = 0; i < n; ++i)
                    group[i] = map_.cell_var(block, i, j, k);
                exactly_one(group);
            }
        for (int i = 0; i < n; ++i)  // each symbol once per row
            for (int k = 0; k < n; ++k) {
                for (int j = 0; j < n; ++j)
                    group[j] = map_.cell_var(block, i, j, k);
                exactly_one(group);
            }
        end();
    }

    /// Bare totalizer cardinality constraint (sum of lits = r).
    void encode_cardinality(const std::vector<Lit>& lits, int r) {
        begin("cardinality");
        encode_exactly(formula_, lits, r);
        end();
    }

    /// b = compose(a, z): (Z[i,j]=i' and A[i',j]=k) -> B[i,j]=k, plus the
    /// two technically redundant converse families when requested.  The
    /// caller separately emits z's Latin constraints.
    void encode_trp_composition(int z, int a, int b, bool redundant) {
        const int n = map_.order();
        begin("trp-composition-core");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int ip = 0; ip < n; ++ip)
                    for (int k = 0; k < n; ++k)
                        formula_.add_clause({-map_.cell_var(z, i, j, ip),
                                             -map_.cell_var(a, ip, j, k),
                                             map_.cell_var(b, i, j, k)});
        end();
        if (!redundant)
            return;
        begin("trp-composition-back");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int ip = 0; ip < n; ++ip)
                    for (int k = 0; k < n; ++k)
                        formula_.add_clause({-map_.cell_var(z, i, j, ip),
                                             -map_.cell_var(b, i, j, k),
                                             map_.cell_var(a, ip, j, k)});
        end();
        begin("trp-composition-define");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int ip = 0; ip < n; ++ip)
                    for (int k = 0; k < n; ++k)
                        formula_.add_clause({-map_.cell_var(a, ip, j, k),
                                             -map_.cell_var(b, i, j, k),
                                             map_.cell_var(z, i, j, ip)});
        end();
    }

    /// Direct Definition-1 encoding: rows of a may not meet a row of b in
    /// two columns.  Theta(n^6) length-4 clauses; cross-validation only.
    void encode_trp_direct(int a, int b) {
        begin("trp-direct");
        const int n = map_.order();
        for (int i = 0; i < n; ++i)
            for (int ip = 0; ip < n; ++ip)
                for (int j = 0; j < n; ++j)
                    for (int jp = j + 1; jp < n; ++jp)
                        for (int k = 0; k < n; ++k)
                            for (int kp = 0; kp < n; ++kp)
                                formula_.add_clause({-map_.cell_var(a, i, j, k),
                                                     -map_.cell_var(a, i, jp, kp),
                                                     -map_.cell_var(b, ip, j, k),
                                                     -map_.cell_var(b, ip, jp, kp)});
        end();
    }

    /// Colour structure of one square: white linkage on columns 6..9, dark
    /// support on columns 0..5, per-row type cardinalities with rows
    /// pre-assigned to types in nondecreasing k order, and the two-darks
    /// rule per column.
    void encode_colours(int cells, int colours, const SquareType& type) {
        const std::string& sq = map_.blocks()[cells].name;
        const int n = map_.order();
        begin("colour-link-" + sq);
        for (int i = 0; i < n; ++i) {
            for (int j = 6; j < n; ++j) {
                const int w = map_.white_var(colours, i, j);
                Clause any{-w};
                for (int r = 0; r < 4; ++r) {
                    formula_.add_clause({-map_.cell_var(cells, i, j, r), w});
                    any.push_back(map_.cell_var(cells, i, j, r));
                }
                formula_.add_clause(std::move(any));
            }
            for (int j = 0; j < 6; ++j) {
                Clause support{-map_.dark_var(colours, i, j)};
                for (int r = 4; r < n; ++r)
                    support.push_back(map_.cell_var(cells, i, j, r));
                formula_.add_clause(std::move(support));
            }
        }
        end();
        begin("colour-rows-" + sq);
        int row = 0;
        for (int k = 1; k <= 4; ++k) {
            for (int copies = 0; copies < type.counts[k - 1]; ++copies, ++row) {
                std::vector<Lit> darks, whites;
                for (int j = 0; j < 6; ++j)
                    darks.push_back(map_.dark_var(colours, row, j));
                for (int j = 6; j < n; ++j)
                    whites.push_back(map_.white_var(colours, row, j));
                encode_exactly(formula_, darks, dark_count_for_type(k));
                encode_exactly(formula_, whites, k);
            }
        }
        end();
        begin("colour-cols-" + sq);
        for (int j = 0; j < 6; ++j) {
            std::vector<Lit> darks;
            for (int i = 0; i < n; ++i)
                darks.push_back(map_.dark_var(colours, i, j));
            encode_exactly(formula_, darks, 2);
        }
        end();
    }

    /// Dark-colour transfer: a dark symbol of P in column j is dark in Q
    /// too (and conversely when both_directions).
    void encode_colour_consistency(int cells_p, int col_p, int cells_q, int col_q,
                                   bool both_directions) {
        begin("colour-consistency");
        const int n = map_.order();
        auto direction = [&](int ca, int la, int cb, int lb) {
            for (int i = 0; i < n; ++i)
                for (int ip = 0; ip < n; ++ip)
                    for (int j = 0; j < 6; ++j)
                        for (int k = 4; k < n; ++k)
                            formula_.add_clause({-map_.cell_var(ca, i, j, k),
                                                 -map_.dark_var(la, i, j),
                                                 -map_.cell_var(cb, ip, j, k),
                                                 map_.dark_var(lb, ip, j)});
        };
        direction(cells_p, col_p, cells_q, col_q);
        if (both_directions)
            direction(cells_q, col_q, cells_p, col_p);
        end();
    }

    /// Omega subsquare consistency for both squares: the shared first-row
    /// clauses, the omega-guarded clauses for rows 1..3 of each candidate
    /// subsquare, omega1 | omega2, and the mode's unit clause.
    void encode_subsquare(int cells_p, int cells_q, int w1, int w2, SubsquareMode mode) {
        begin("subsquare");
        const int n = map_.order();
        const Square& o1 = omega1();
        const Square& o2 = omega2();
        for (int cells : {cells_p, cells_q})
            for (int i = 0; i < n; ++i)
                for (int j = 6; j < n; ++j)
                    for (int jp = j + 1; jp < n; ++jp)
                        formula_.add_clause({-map_.cell_var(cells, i, j, j - 6),
                                             -map_.cell_var(cells, i, jp, jp - 6)});
        auto guarded = [&](const Square& omega, int guard) {
            for (int cells : {cells_p, cells_q})
                for (int ip = 1; ip < 4; ++ip)
                    for (int i = 0; i < n; ++i)
                        for (int j = 6; j < n; ++j)
                            for (int jp = j + 1; jp < n; ++jp)
                                formula_.add_clause(
                                    {-map_.flag_var(guard),
                                     -map_.cell_var(cells, i, j, omega.at(ip, j - 6)),
                                     -map_.cell_var(cells, i, jp, omega.at(ip, jp - 6))});
        };
        guarded(o1, w1);
        guarded(o2, w2);
        formula_.add_clause({map_.flag_var(w1), map_.flag_var(w2)});
        if (mode == SubsquareMode::omega1_only)
            formula_.add_clause({map_.flag_var(w1)});
        else if (mode == SubsquareMode::omega2_only)
            formula_.add_clause({map_.flag_var(w2)});
        end();
    }

    /// Normal-form clauses: fixed first-row cells of P, the conditional
    /// completions of P's first row, and first-column lex ordering between
    /// adjacent same-type rows of both squares.
    void encode_symmetry_breaking(int cells_p, int cells_q, const SquareType& type_p,
                                  const SquareType& type_q, bool optional) {
        begin("symmetry-breaking");
        formula_.add_clause({map_.cell_var(cells_p, 0, 0, 0)});
        for (int j = 3; j <= 5; ++j)
            formula_.add_clause({map_.cell_var(cells_p, 0, j, j + 1)});
        for (int j = 7; j <= 9; ++j)
            formula_.add_clause({map_.cell_var(cells_p, 0, j, j)});
        // P[0,6] determines the two remaining whites in columns 1 and 2
        const std::array<std::array<int, 3>, 3> completions = {{
            {3, 1, 2},  // P[0,6]=3 -> P[0,1]=1, P[0,2]=2
            {2, 1, 3},
            {1, 2, 3},
        }};
        for (const auto& [c, a, b] : completions) {
            formula_.add_clause({-map_.cell_var(cells_p, 0, 6, c), map_.cell_var(cells_p, 0, 1, a)});
            formula_.add_clause({-map_.cell_var(cells_p, 0, 6, c), map_.cell_var(cells_p, 0, 2, b)});
        }
        if (optional)
            formula_.add_clause(
                {-map_.cell_var(cells_p, 0, 1, 2), map_.cell_var(cells_p, 0, 2, 3)});
        lex_first_column(cells_p, type_p);
        lex_first_column(cells_q, type_q);
        end();
    }

    [[nodiscard]] Manifest manifest(std::string kind) const {
        Manifest m;
        m.kind = std::move(kind);
        m.order = map_.order();
        m.latin = to_string(latin_);
        m.blocks = map_.blocks();
        m.families = families_;
        m.variable_count = formula_.variable_count();
        m.clause_count = formula_.clause_count();
        return m;
    }

private:
    void begin(std::string name) {
        family_name_ = std::move(name);
        family_mark_ = formula_.clause_count();
    }

    void end() {
        families_.push_back(FamilyCount{family_name_, formula_.clause_count() - family_mark_});
    }

    void exactly_one(const std::vector<Lit>& group) {
        if (latin_ == LatinEncoding::pairwise)
            encode_exactly_one_pairwise(formula_, group);
        else
            encode_exactly(formula_, group, 1);
    }

    void lex_first_column(int cells, const SquareType& type) {
        const int n = map_.order();
        int row = 0;
        for (int k = 1; k <= 4; ++k) {
            for (int copies = 0; copies < type.counts[k - 1]; ++copies, ++row) {
                if (copies + 1 == type.counts[k - 1])
                    continue;  // next row starts a different type block
                for (int sym = 1; sym < n; ++sym)
                    for (int lower = 0; lower < sym; ++lower)
                        formula_.add_clause({-map_.cell_var(cells, row, 0, sym),
                                             -map_.cell_var(cells, row + 1, 0, lower)});
            }
        }
    }

    VarMap map_;
    CnfFormula formula_;
    LatinEncoding latin_;
    std::vector<FamilyCount> families_;
    std::string family_name_;
    long family_mark_ = 0;
};

struct EncodedInstance {
    CnfFormula formula;
    VarMap varmap;
    Manifest manifest;
};

/// The full instance for one pair case at order 10.
[[nodiscard]] inline EncodedInstance encode_case(const EncodeOptions& opts) {
    InstanceBuilder b(10, opts.latin_encoding);
    VarMap& map = b.varmap();
    const int p = map.add_cell_block("P");
    const int q = map.add_cell_block("Q");
    const int z = map.add_cell_block("Z");
    const int cp = map.add_colour_block("colours-P");
    const int cq = map.add_colour_block("colours-Q");
    const int w1 = map.add_flag("omega1");
    const int w2 = map.add_flag("omega2");
    b.seal_variables();

    b.encode_latin(p);
    b.encode_latin(q);
    b.encode_trp_composition(z, p, q, opts.redundant_trp_clauses);
    b.encode_latin(z);
    b.encode_colours(p, cp, opts.pair_case.first);
    b.encode_colours(q, cq, opts.pair_case.second);
    if (opts.colour_consistency)
        b.encode_colour_consistency(p, cp, q, cq, opts.optional_clauses);
    b.encode_subsquare(p, q, w1, w2, opts.subsquare);
    if (opts.symmetry_breaking)
        b.encode_symmetry_breaking(p, q, opts.pair_case.first, opts.pair_case.second,
                                   opts.optional_clauses);

    Manifest m = b.manifest("case");
    m.case_id = opts.pair_case.id();
    m.subsquare = to_string(opts.subsquare);
    m.redundant = opts.redundant_trp_clauses;
    m.symmetry = opts.symmetry_breaking;
    m.optional = opts.optional_clauses;
    m.consistency = opts.colour_consistency;
    return EncodedInstance{std::move(b.formula()), std::move(b.varmap()), std::move(m)};
}

/// Non-extendability instance: P and Q fixed by unit clauses, a fresh
/// Latin square L, and composition blocks asserting (L,P) and (L,Q) are
/// TRPs.  Works at any order (order-4 instances serve as positive
/// controls).
[[nodiscard]] inline EncodedInstance encode_extension(
    const Square& p, const Square& q, LatinEncoding latin = LatinEncoding::totalizer) {
    detail::require_same_order(p, q);
    if (!is_latin(p) || !is_latin(q))
        throw std::invalid_argument("extension instance needs Latin squares");
    if (!is_trp(p, q))
        throw std::invalid_argument("extension instance needs a verified TRP");
    const int n = p.order();
    InstanceBuilder b(n, latin);
    VarMap& map = b.varmap();
    const int bp = map.add_cell_block("P");
    const int bq = map.add_cell_block("Q");
    const int bl = map.add_cell_block("L");
    const int z1 = map.add_cell_block("Z1");
    const int z2 = map.add_cell_block("Z2");
    b.seal_variables();

    // one unit per cell of the two fixed squares
    CnfFormula& f = b.formula();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            f.add_clause({map.cell_var(bp, i, j, p.at(i, j))});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            f.add_clause({map.cell_var(bq, i, j, q.at(i, j))});

    b.encode_latin(bp);
    b.encode_latin(bq);
    b.encode_latin(bl);
    b.encode_trp_composition(z1, bl, bp, true);
    b.encode_latin(z1);
    b.encode_trp_composition(z2, bl, bq, true);
    b.encode_latin(z2);

    Manifest m = b.manifest("extension");
    // unit clauses precede the families; record them for the audit trail
    m.families.insert(m.families.begin(), FamilyCount{"fixed-cells", 2L * n * n});
    return EncodedInstance{std::move(b.formula()), std::move(b.varmap()), std::move(m)};
}

/// Small cross-validation instance: Latin P and Q plus one of the two TRP
/// constraint styles; no colour machinery.  Used to compare model sets of
/// the direct and composition encodings at small orders.
[[nodiscard]] inline EncodedInstance encode_trp_pair(int order, TrpStyle style,
                                                     LatinEncoding latin,
                                                     bool redundant = true) {
    InstanceBuilder b(order, latin);
    VarMap& map = b.varmap();
    const int p = map.add_cell_block("P");
    const int q = map.add_cell_block("Q");
    const int z = style == TrpStyle::composition ? map.add_cell_block("Z") : -1;
    b.seal_variables();

    b.encode_latin(p);
    b.encode_latin(q);
    if (style == TrpStyle::composition) {
        b.encode_trp_composition(z, p, q, redundant);
        b.encode_latin(z);
    } else {
        b.encode_trp_direct(p, q);
    }
    Manifest m = b.manifest("pair");
    m.redundant = redundant;
    return EncodedInstance{std::move(b.formula()), std::move(b.varmap()), std::move(m)};
}

/// Rebuilds the variable layout that produced a manifest; decoding needs
/// only this, not the clauses.
[[nodiscard]] inline VarMap varmap_from_manifest(const Manifest& m) {
    VarMap map(m.order);
    for (const auto& blk : m.blocks) {
        switch (blk.kind) {
            case BlockKind::cells: map.add_cell_block(blk.name); break;
            case BlockKind::colours: map.add_colour_block(blk.name); break;
            case BlockKind::flag: map.add_flag(blk.name); break;
        }
    }
    for (std::size_t i = 0; i < m.blocks.size(); ++i)
        if (map.blocks()[i].first != m.blocks[i].first || map.blocks()[i].count != m.blocks[i].count)
            throw std::invalid_argument("manifest block layout is inconsistent");
    return map;
}

/// model[v] for v in 1..variableCount; index 0 ignored.
using Model = std::vector<bool>;

[[nodiscard]] inline Square decode_square(const Model& model, const VarMap& map,
                                          const std::string& block_name) {
    const int block = map.block_index(block_name);
    const int n = map.order();
    std::vector<Symbol> cells(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int found = -1;
            for (int k = 0; k < n; ++k) {
                const int var = map.cell_var(block, i, j, k);
                if (var < static_cast<int>(model.size()) && model[var]) {
                    if (found >= 0)
                        throw std::runtime_error("model sets two symbols in cell (" +
                                                 std::to_string(i) + "," + std::to_string(j) +
                                                 ") of " + block_name);
                    found = k;
                }
            }
            if (found < 0)
                throw std::runtime_error("model sets no symbol in cell (" + std::to_string(i) +
                                         "," + std::to_string(j) + ") of " + block_name);
            cells[static_cast<std::size_t>(i) * n + j] = static_cast<Symbol>(found);
        }
    return Square(n, std::move(cells));
}

/// Colouring from the flag variables plus the forced whites (symbols < 4)
/// in the first six columns.
[[nodiscard]] inline Colouring decode_colouring(const Model& model, const VarMap& map,
                                                const Square& square,
                                                const std::string& colour_block_name) {
    const int block = map.block_index(colour_block_name);
    const int n = map.order();
    std::vector<Colour> colour(static_cast<std::size_t>(n) * n, Colour::light);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int var = map.colour_var(block, i, j);
            const bool flag = var < static_cast<int>(model.size()) && model[var];
            if (j >= 6) {
                if (flag)
                    colour[static_cast<std::size_t>(i) * n + j] = Colour::white;
            } else if (flag) {
                colour[static_cast<std::size_t>(i) * n + j] = Colour::dark;
            } else if (square.at(i, j) < 4) {
                colour[static_cast<std::size_t>(i) * n + j] = Colour::white;
            }
        }
    return Colouring(n, std::move(colour));
}

struct DecodedCase {
    Square p, q, z;
    Colouring colours_p, colours_q;
    bool omega1_used = false;
    bool omega2_used = false;
};

[[nodiscard]] inline DecodedCase decode_case_model(const Model& model, const VarMap& map) {
    Square p = decode_square(model, map, "P");
    Square q = decode_square(model, map, "Q");
    Square z = decode_square(model, map, "Z");
    Colouring cp = decode_colouring(model, map, p, "colours-P");
    Colouring cq = decode_colouring(model, map, q, "colours-Q");
    const int v1 = map.flag_var(map.block_index("omega1"));
    const int v2 = map.flag_var(map.block_index("omega2"));
    return DecodedCase{std::move(p),  std::move(q),
                       std::move(z),  std::move(cp),
                       std::move(cq), v1 < static_cast<int>(model.size()) && model[v1],
                       v2 < static_cast<int>(model.size()) && model[v2]};
}

struct DecodedExtension {
    Square p, q, l, z1, z2;
};

[[nodiscard]] inline DecodedExtension decode_extension_model(const Model& model,
                                                             const VarMap& map) {
    return DecodedExtension{decode_square(model, map, "P"), decode_square(model, map, "Q"),
                            decode_square(model, map, "L"), decode_square(model, map, "Z1"),
                            decode_square(model, map, "Z2")};
}

}  // namespace trp
