#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "trp/encode.hpp"

#include "support/model_enumerator.hpp"
#include "support/test_util.hpp"

using namespace trp;
using namespace trp::testsupport;

namespace {

// ModelEnumerator returns 0-based vectors; the decoders index by variable.
Model to_model(const std::vector<bool>& bits) {
    Model m(bits.size() + 1, false);
    for (std::size_t i = 0; i < bits.size(); ++i)
        m[i + 1] = bits[i];
    return m;
}

bool has_clause(const CnfFormula& f, Clause wanted) {
    std::sort(wanted.begin(), wanted.end());
    for (const Clause& c : f.clauses()) {
        if (c.size() != wanted.size())
            continue;
        Clause sorted = c;
        std::sort(sorted.begin(), sorted.end());
        if (sorted == wanted)
            return true;
    }
    return false;
}

long family_count(const Manifest& m, const std::string& name) {
    for (const FamilyCount& f : m.families)
        if (f.name == name)
            return f.clauses;
    FAIL("no clause family named " << name);
    return -1;
}

bool has_family(const Manifest& m, const std::string& name) {
    for (const FamilyCount& f : m.families)
        if (f.name == name)
            return true;
    return false;
}

std::vector<Lit> fix_square(const VarMap& map, int block, const Square& s) {
    std::vector<Lit> units;
    for (int i = 0; i < s.order(); ++i)
        for (int j = 0; j < s.order(); ++j)
            units.push_back(map.cell_var(block, i, j, s.at(i, j)));
    return units;
}

using CellPair = std::pair<std::vector<Symbol>, std::vector<Symbol>>;

}  // namespace

TEST_CASE("case variable layout is fixed and self-describing") {
    EncodeOptions opts{pair_case_from_id("UU")};
    EncodedInstance inst = encode_case(opts);
    const VarMap& map = inst.varmap;

    REQUIRE(map.order() == 10);
    REQUIRE(map.semantic_count() == 3202);
    const auto& blocks = map.blocks();
    REQUIRE(blocks.size() == 7);
    CHECK(blocks[0].name == "P");
    CHECK(blocks[0].first == 1);
    CHECK(blocks[0].count == 1000);
    CHECK(blocks[1].name == "Q");
    CHECK(blocks[1].first == 1001);
    CHECK(blocks[2].name == "Z");
    CHECK(blocks[2].first == 2001);
    CHECK(blocks[3].name == "colours-P");
    CHECK(blocks[3].first == 3001);
    CHECK(blocks[3].count == 100);
    CHECK(blocks[4].name == "colours-Q");
    CHECK(blocks[4].first == 3101);
    CHECK(blocks[5].name == "omega1");
    CHECK(blocks[5].first == 3201);
    CHECK(blocks[6].name == "omega2");
    CHECK(blocks[6].first == 3202);

    const int p = map.block_index("P");
    const int cp = map.block_index("colours-P");
    CHECK(map.cell_var(p, 0, 0, 0) == 1);
    CHECK(map.cell_var(p, 0, 0, 9) == 10);
    CHECK(map.cell_var(p, 0, 1, 0) == 11);
    CHECK(map.cell_var(p, 1, 0, 0) == 101);
    CHECK(map.cell_var(p, 9, 9, 9) == 1000);
    CHECK(map.cell_var(map.block_index("Q"), 0, 0, 0) == 1001);
    CHECK(map.colour_var(cp, 0, 0) == 3001);
    CHECK(map.dark_var(cp, 0, 5) == 3006);
    CHECK(map.white_var(cp, 0, 6) == 3007);
    CHECK(map.colour_var(cp, 9, 9) == 3100);
    CHECK(map.flag_var(map.block_index("omega1")) == 3201);
    CHECK(map.flag_var(map.block_index("omega2")) == 3202);

    CHECK_THROWS_AS(map.white_var(cp, 0, 5), std::logic_error);
    CHECK_THROWS_AS(map.dark_var(cp, 0, 6), std::logic_error);
    CHECK_THROWS_AS(map.cell_var(p, 0, 0, 10), std::out_of_range);
    CHECK_THROWS_AS(map.cell_var(cp, 0, 0, 0), std::logic_error);
    CHECK_THROWS_AS(map.colour_var(p, 0, 0), std::logic_error);
    CHECK_THROWS_AS(map.block_index("R"), std::invalid_argument);

    CHECK(map.describe(1) == "P[0,0]=0");
    CHECK(map.describe(1000) == "P[9,9]=9");
    CHECK(map.describe(1001) == "Q[0,0]=0");
    CHECK(map.describe(3001) == "dark(colours-P,0,0)");
    CHECK(map.describe(3007) == "white(colours-P,0,6)");
    CHECK(map.describe(3201) == "omega1");
    CHECK(map.describe(3203) == "aux3203");

    // cardinality machinery lands strictly after the semantic range
    CHECK(inst.formula.variable_count() > 3202);
    CHECK(inst.manifest.variable_count == inst.formula.variable_count());
}

TEST_CASE("variable map construction guards") {
    CHECK_THROWS_AS(VarMap(0), std::invalid_argument);
    CHECK_THROWS_AS(VarMap(17), std::invalid_argument);
    VarMap small(4);
    small.add_cell_block("P");
    CHECK_THROWS_AS(small.add_cell_block("P"), std::logic_error);
    CHECK_THROWS_AS(small.add_colour_block("colours-P"), std::logic_error);
}

TEST_CASE("manifest carries the layout and regenerates the variable map") {
    EncodeOptions opts{pair_case_from_id("SX")};
    opts.subsquare = SubsquareMode::omega2_only;
    opts.latin_encoding = LatinEncoding::pairwise;
    opts.optional_clauses = false;
    EncodedInstance inst = encode_case(opts);
    const Manifest& m = inst.manifest;

    CHECK(m.kind == "case");
    CHECK(m.case_id == "SX");
    CHECK(m.subsquare == "omega2");
    CHECK(m.latin == "pairwise");
    CHECK(m.optional == false);
    CHECK(m.variable_count == inst.formula.variable_count());
    CHECK(m.clause_count == inst.formula.clause_count());

    long sum = 0;
    for (const FamilyCount& f : m.families)
        sum += f.clauses;
    CHECK(sum == m.clause_count);

    const auto lines = m.comment_lines();
    REQUIRE(!lines.empty());
    CHECK(lines[0] ==
          "instance kind=case order=10 case=SX subsquare=omega2 latin=pairwise "
          "redundant=1 symmetry=1 optional=0 consistency=1");
    CHECK(std::find(lines.begin(), lines.end(), "block P 1 1000") != lines.end());
    CHECK(std::find(lines.begin(), lines.end(), "block omega2 3202 3202") != lines.end());
    CHECK(std::find(lines.begin(), lines.end(),
                    "aux 3203 " + std::to_string(m.variable_count)) != lines.end());

    VarMap rebuilt = varmap_from_manifest(m);
    CHECK(rebuilt.semantic_count() == inst.varmap.semantic_count());
    CHECK(rebuilt.cell_var(rebuilt.block_index("Z"), 2, 3, 4) ==
          inst.varmap.cell_var(inst.varmap.block_index("Z"), 2, 3, 4));
    CHECK(rebuilt.colour_var(rebuilt.block_index("colours-Q"), 4, 7) ==
          inst.varmap.colour_var(inst.varmap.block_index("colours-Q"), 4, 7));

    Manifest broken = m;
    broken.blocks[1].first = 999;
    CHECK_THROWS_AS(varmap_from_manifest(broken), std::invalid_argument);
}

TEST_CASE("latin block models are exactly the latin squares") {
    for (LatinEncoding enc : {LatinEncoding::pairwise, LatinEncoding::totalizer}) {
        INFO("encoding " << to_string(enc));
        InstanceBuilder b(3, enc);
        const int block = b.varmap().add_cell_block("P");
        b.seal_variables();
        b.encode_latin(block);

        ModelEnumerator dpll(b.formula());
        const auto models = dpll.all_models(27);
        REQUIRE(models.size() == 12);

        std::set<std::vector<Symbol>> seen;
        for (const auto& bits : models) {
            Square s = decode_square(to_model(bits), b.varmap(), "P");
            CHECK(is_latin(s));
            seen.insert(s.cells());
        }
        CHECK(seen.size() == 12);
        for (const Square& s : all_latin_squares(3))
            CHECK(seen.count(s.cells()) == 1);
    }
}

TEST_CASE("clause counts match the closed formulas") {
    SECTION("pairwise latin and composition blocks") {
        EncodedInstance ten =
            encode_trp_pair(10, TrpStyle::composition, LatinEncoding::pairwise);
        CHECK(family_count(ten.manifest, "latin-P") == 13800);
        CHECK(family_count(ten.manifest, "latin-Q") == 13800);
        CHECK(family_count(ten.manifest, "latin-Z") == 13800);
        CHECK(family_count(ten.manifest, "trp-composition-core") == 10000);
        CHECK(family_count(ten.manifest, "trp-composition-back") == 10000);
        CHECK(family_count(ten.manifest, "trp-composition-define") == 10000);

        EncodedInstance four =
            encode_trp_pair(4, TrpStyle::composition, LatinEncoding::pairwise);
        CHECK(family_count(four.manifest, "latin-P") == 336);
    }
    SECTION("direct TRP clauses") {
        EncodedInstance three = encode_trp_pair(3, TrpStyle::direct, LatinEncoding::pairwise);
        CHECK(family_count(three.manifest, "trp-direct") == 243);
        for (const Clause& c : three.formula.clauses())
            if (c.size() == 4)
                CHECK(std::all_of(c.begin(), c.end(), [](Lit l) { return l < 0; }));

        EncodedInstance ten = encode_trp_pair(10, TrpStyle::direct, LatinEncoding::pairwise);
        CHECK(family_count(ten.manifest, "trp-direct") == 450000);
    }
    SECTION("redundant composition families can be dropped") {
        EncodedInstance lean =
            encode_trp_pair(10, TrpStyle::composition, LatinEncoding::pairwise, false);
        CHECK(family_count(lean.manifest, "trp-composition-core") == 10000);
        CHECK_FALSE(has_family(lean.manifest, "trp-composition-back"));
        CHECK_FALSE(has_family(lean.manifest, "trp-composition-define"));
        CHECK_FALSE(lean.manifest.redundant);
    }
}

TEST_CASE("pair models at order 3 are exactly the latin TRP pairs") {
    std::set<CellPair> expected;
    for (const Square& p : all_latin_squares(3))
        for (const Square& q : all_latin_squares(3))
            if (naive_is_trp(p, q))
                expected.insert({p.cells(), q.cells()});
    REQUIRE(!expected.empty());

    EncodedInstance comp = encode_trp_pair(3, TrpStyle::composition, LatinEncoding::pairwise);
    ModelEnumerator comp_dpll(comp.formula);
    const auto comp_models = comp_dpll.all_models();
    std::set<CellPair> comp_pairs;
    for (const auto& bits : comp_models) {
        const Model m = to_model(bits);
        Square p = decode_square(m, comp.varmap, "P");
        Square q = decode_square(m, comp.varmap, "Q");
        Square z = decode_square(m, comp.varmap, "Z");
        CHECK(z == compose(column_inverse(p), q));
        CHECK(is_latin(z));
        comp_pairs.insert({p.cells(), q.cells()});
    }
    CHECK(comp_models.size() == expected.size());  // z is determined by (p,q)
    CHECK(comp_pairs == expected);

    EncodedInstance direct = encode_trp_pair(3, TrpStyle::direct, LatinEncoding::pairwise);
    ModelEnumerator direct_dpll(direct.formula);
    std::set<CellPair> direct_pairs;
    for (const auto& bits : direct_dpll.all_models()) {
        const Model m = to_model(bits);
        direct_pairs.insert({decode_square(m, direct.varmap, "P").cells(),
                             decode_square(m, direct.varmap, "Q").cells()});
    }
    CHECK(direct_pairs == expected);
}

TEST_CASE("fixing one square at order 4 enumerates its TRP partners") {
    const Square p = mols4_a();
    std::set<std::vector<Symbol>> expected;
    for (const Square& q : all_latin_squares(4))
        if (naive_is_trp(p, q))
            expected.insert(q.cells());
    REQUIRE(!expected.empty());

    EncodedInstance inst = encode_trp_pair(4, TrpStyle::composition, LatinEncoding::pairwise);
    const VarMap& map = inst.varmap;
    ModelEnumerator dpll(inst.formula);
    const auto models = dpll.all_models(0, fix_square(map, map.block_index("P"), p));
    REQUIRE(models.size() == expected.size());

    std::set<std::vector<Symbol>> got;
    for (const auto& bits : models) {
        const Model m = to_model(bits);
        CHECK(decode_square(m, map, "P") == p);
        Square q = decode_square(m, map, "Q");
        Square z = decode_square(m, map, "Z");
        CHECK(q == compose(p, z));
        CHECK(naive_is_trp(p, q));
        got.insert(q.cells());
    }
    CHECK(got == expected);
}

TEST_CASE("colour structure pins rows to their types") {
    EncodeOptions opts{pair_case_from_id("RX")};
    EncodedInstance inst = encode_case(opts);
    const VarMap& map = inst.varmap;
    const CnfFormula& f = inst.formula;
    const int p = map.block_index("P");
    const int cp = map.block_index("colours-P");
    const int cq = map.block_index("colours-Q");

    CHECK(family_count(inst.manifest, "colour-link-P") == 260);
    CHECK(family_count(inst.manifest, "colour-link-Q") == 260);

    // white iff small symbol, last four columns
    CHECK(has_clause(f, {-map.cell_var(p, 2, 6, 0), map.white_var(cp, 2, 6)}));
    CHECK(has_clause(f, {-map.white_var(cp, 2, 6), map.cell_var(p, 2, 6, 0),
                         map.cell_var(p, 2, 6, 1), map.cell_var(p, 2, 6, 2),
                         map.cell_var(p, 2, 6, 3)}));
    // dark implies large symbol, first six columns
    Clause support{-map.dark_var(cp, 4, 3)};
    for (int r = 4; r < 10; ++r)
        support.push_back(map.cell_var(p, 4, 3, r));
    CHECK(has_clause(f, support));

    // type R: rows 0..7 are p1 (no darks), rows 8..9 are p4 (all six dark)
    for (int j = 0; j < 6; ++j) {
        CHECK(has_clause(f, {-map.dark_var(cp, 0, j)}));
        CHECK(has_clause(f, {-map.dark_var(cp, 7, j)}));
        CHECK(has_clause(f, {map.dark_var(cp, 8, j)}));
        CHECK(has_clause(f, {map.dark_var(cp, 9, j)}));
    }
    for (int j = 6; j < 10; ++j) {
        CHECK(has_clause(f, {map.white_var(cp, 9, j)}));
        CHECK_FALSE(has_clause(f, {map.white_var(cp, 0, j)}));
    }

    // type X: rows 0..3 are p1, rows 4..9 are p2 (two darks, not forced)
    for (int j = 0; j < 6; ++j) {
        CHECK(has_clause(f, {-map.dark_var(cq, 3, j)}));
        CHECK_FALSE(has_clause(f, {map.dark_var(cq, 4, j)}));
        CHECK_FALSE(has_clause(f, {-map.dark_var(cq, 4, j)}));
    }
}

TEST_CASE("colour consistency transfers dark symbols between the squares") {
    EncodeOptions opts{pair_case_from_id("UU")};
    EncodedInstance inst = encode_case(opts);
    const VarMap& map = inst.varmap;
    const int p = map.block_index("P"), q = map.block_index("Q");
    const int cp = map.block_index("colours-P"), cq = map.block_index("colours-Q");

    CHECK(family_count(inst.manifest, "colour-consistency") == 7200);
    CHECK(has_clause(inst.formula, {-map.cell_var(p, 0, 0, 5), -map.dark_var(cp, 0, 0),
                                    -map.cell_var(q, 3, 0, 5), map.dark_var(cq, 3, 0)}));
    CHECK(has_clause(inst.formula, {-map.cell_var(q, 0, 2, 9), -map.dark_var(cq, 0, 2),
                                    -map.cell_var(p, 7, 2, 9), map.dark_var(cp, 7, 2)}));

    EncodeOptions one_way{pair_case_from_id("UU")};
    one_way.optional_clauses = false;
    EncodedInstance lean = encode_case(one_way);
    CHECK(family_count(lean.manifest, "colour-consistency") == 3600);
    CHECK(has_clause(lean.formula, {-map.cell_var(p, 0, 0, 5), -map.dark_var(cp, 0, 0),
                                    -map.cell_var(q, 3, 0, 5), map.dark_var(cq, 3, 0)}));
    CHECK_FALSE(has_clause(lean.formula,
                           {-map.cell_var(q, 0, 2, 9), -map.dark_var(cq, 0, 2),
                            -map.cell_var(p, 7, 2, 9), map.dark_var(cp, 7, 2)}));

    EncodeOptions ablated{pair_case_from_id("UU")};
    ablated.colour_consistency = false;
    EncodedInstance off = encode_case(ablated);
    CHECK_FALSE(has_family(off.manifest, "colour-consistency"));
}

TEST_CASE("subsquare clauses follow the omega fixtures") {
    EncodeOptions opts{pair_case_from_id("UX")};
    EncodedInstance inst = encode_case(opts);
    const VarMap& map = inst.varmap;
    const CnfFormula& f = inst.formula;
    const int p = map.block_index("P"), q = map.block_index("Q");
    const int w1 = map.flag_var(map.block_index("omega1"));
    const int w2 = map.flag_var(map.block_index("omega2"));

    CHECK(family_count(inst.manifest, "subsquare") == 841);
    CHECK(has_clause(f, {w1, w2}));
    CHECK_FALSE(has_clause(f, {w1}));
    CHECK_FALSE(has_clause(f, {w2}));

    // both omegas share the first row 0,1,2,3
    CHECK(has_clause(f, {-map.cell_var(p, 5, 6, 0), -map.cell_var(p, 5, 9, 3)}));
    CHECK(has_clause(f, {-map.cell_var(q, 0, 7, 1), -map.cell_var(q, 0, 8, 2)}));
    // omega1 row 1 is 1,2,3,0; omega2 row 1 is 1,0,3,2
    CHECK(has_clause(f, {-w1, -map.cell_var(p, 0, 6, 1), -map.cell_var(p, 0, 7, 2)}));
    CHECK(has_clause(f, {-w2, -map.cell_var(p, 0, 6, 1), -map.cell_var(p, 0, 7, 0)}));
    CHECK(has_clause(f, {-w2, -map.cell_var(q, 9, 8, 3), -map.cell_var(q, 9, 9, 2)}));

    EncodeOptions pinned{pair_case_from_id("UX")};
    pinned.subsquare = SubsquareMode::omega1_only;
    EncodedInstance only1 = encode_case(pinned);
    CHECK(family_count(only1.manifest, "subsquare") == 842);
    CHECK(has_clause(only1.formula, {w1}));
    CHECK_FALSE(has_clause(only1.formula, {w2}));
}

TEST_CASE("symmetry breaking pins the first row and orders row blocks") {
    EncodeOptions opts{pair_case_from_id("UU")};
    EncodedInstance inst = encode_case(opts);
    const VarMap& map = inst.varmap;
    const CnfFormula& f = inst.formula;
    const int p = map.block_index("P"), q = map.block_index("Q");

    // 7 units + 6 conditional completions + 1 optional implication
    // + 45 clauses for each in-block adjacent row pair (7 per square for U)
    CHECK(family_count(inst.manifest, "symmetry-breaking") == 644);

    CHECK(has_clause(f, {map.cell_var(p, 0, 0, 0)}));
    for (int j = 3; j <= 5; ++j)
        CHECK(has_clause(f, {map.cell_var(p, 0, j, j + 1)}));
    for (int j = 7; j <= 9; ++j)
        CHECK(has_clause(f, {map.cell_var(p, 0, j, j)}));
    CHECK_FALSE(has_clause(f, {map.cell_var(q, 0, 0, 0)}));

    CHECK(has_clause(f, {-map.cell_var(p, 0, 6, 3), map.cell_var(p, 0, 1, 1)}));
    CHECK(has_clause(f, {-map.cell_var(p, 0, 6, 3), map.cell_var(p, 0, 2, 2)}));
    CHECK(has_clause(f, {-map.cell_var(p, 0, 6, 2), map.cell_var(p, 0, 2, 3)}));
    CHECK(has_clause(f, {-map.cell_var(p, 0, 6, 1), map.cell_var(p, 0, 1, 2)}));
    CHECK(has_clause(f, {-map.cell_var(p, 0, 1, 2), map.cell_var(p, 0, 2, 3)}));

    // lex ordering inside a type block, nothing across block boundaries:
    // U assigns rows 0..5, 6..7, 8..9
    CHECK(has_clause(f, {-map.cell_var(p, 0, 0, 5), -map.cell_var(p, 1, 0, 2)}));
    CHECK(has_clause(f, {-map.cell_var(q, 8, 0, 9), -map.cell_var(q, 9, 0, 0)}));
    CHECK_FALSE(has_clause(f, {-map.cell_var(p, 5, 0, 5), -map.cell_var(p, 6, 0, 2)}));
    CHECK_FALSE(has_clause(f, {-map.cell_var(p, 7, 0, 5), -map.cell_var(p, 8, 0, 2)}));

    EncodeOptions off{pair_case_from_id("UU")};
    off.symmetry_breaking = false;
    EncodedInstance plain = encode_case(off);
    CHECK_FALSE(has_family(plain.manifest, "symmetry-breaking"));
    CHECK_FALSE(has_clause(plain.formula, {map.cell_var(p, 0, 0, 0)}));

    EncodeOptions lean{pair_case_from_id("UU")};
    lean.optional_clauses = false;
    EncodedInstance no_opt = encode_case(lean);
    CHECK(family_count(no_opt.manifest, "symmetry-breaking") == 643);
    CHECK_FALSE(
        has_clause(no_opt.formula, {-map.cell_var(p, 0, 1, 2), map.cell_var(p, 0, 2, 3)}));
}

TEST_CASE("case instances regenerate byte-identically") {
    EncodeOptions opts{pair_case_from_id("WX")};
    EncodedInstance a = encode_case(opts);
    EncodedInstance b = encode_case(opts);
    CHECK(a.formula == b.formula);

    std::ostringstream da, db;
    write_dimacs(da, a.formula, a.manifest.comment_lines());
    write_dimacs(db, b.formula, b.manifest.comment_lines());
    REQUIRE(da.str() == db.str());

    std::istringstream in(da.str());
    CnfFormula parsed = parse_dimacs(in);
    CHECK(parsed == a.formula);
}

TEST_CASE("standalone cardinality blocks are recorded") {
    InstanceBuilder b(2, LatinEncoding::pairwise);
    const int block = b.varmap().add_cell_block("P");
    b.seal_variables();
    std::vector<Lit> lits;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            lits.push_back(b.varmap().cell_var(block, i, j, 0));
    b.encode_cardinality(lits, 2);

    REQUIRE(b.families().size() == 1);
    CHECK(b.families()[0].name == "cardinality");
    CHECK(b.families()[0].clauses == b.formula().clause_count());

    // 4 counted variables with popcount 2, 4 unconstrained
    ModelEnumerator dpll(b.formula());
    CHECK(dpll.all_models(8).size() == 6 * 16);
}

TEST_CASE("extension instances fix the pair and demand a latin mate") {
    const Square p = compose(mols4_a(), column_inverse(mols4_b()));
    const Square q = compose(mols4_a(), column_inverse(mols4_c()));
    REQUIRE(is_latin(p));
    REQUIRE(is_latin(q));
    REQUIRE(naive_is_trp(p, q));

    EncodedInstance inst = encode_extension(p, q, LatinEncoding::pairwise);
    CHECK(inst.manifest.kind == "extension");
    CHECK(inst.manifest.order == 4);
    REQUIRE_FALSE(inst.manifest.families.empty());
    CHECK(inst.manifest.families.front().name == "fixed-cells");
    CHECK(inst.manifest.families.front().clauses == 32);
    long sum = 0;
    for (const FamilyCount& fam : inst.manifest.families)
        sum += fam.clauses;
    CHECK(sum == inst.manifest.clause_count);

    const VarMap& map = inst.varmap;
    REQUIRE(map.blocks().size() == 5);
    CHECK(map.blocks()[2].name == "L");
    CHECK(map.blocks()[3].name == "Z1");
    CHECK(map.blocks()[4].name == "Z2");

    // the fixing units come first, cell by cell
    const auto& clauses = inst.formula.clauses();
    const int pb = map.block_index("P"), qb = map.block_index("Q");
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(clauses[i * 4 + j] == Clause{map.cell_var(pb, i, j, p.at(i, j))});
            CHECK(clauses[16 + i * 4 + j] == Clause{map.cell_var(qb, i, j, q.at(i, j))});
        }

    CHECK_THROWS_AS(encode_extension(identity_square(4), q), std::invalid_argument);
    CHECK_THROWS_AS(encode_extension(c3(), c3()), std::invalid_argument);
    CHECK_THROWS_AS(encode_extension(c3(), mols4_a()), std::invalid_argument);
}

TEST_CASE("extension satisfiability matches brute force at order 3") {
    const auto& latin3 = all_latin_squares(3);
    int sat_seen = 0, unsat_seen = 0;
    for (const Square& p : latin3)
        for (const Square& q : latin3) {
            if (!naive_is_trp(p, q))
                continue;
            bool witness = false;
            for (const Square& l : latin3)
                if (naive_is_trp(l, p) && naive_is_trp(l, q)) {
                    witness = true;
                    break;
                }
            EncodedInstance inst = encode_extension(p, q, LatinEncoding::pairwise);
            ModelEnumerator dpll(inst.formula);
            CHECK(dpll.satisfiable() == witness);
            (witness ? sat_seen : unsat_seen) += 1;
        }
    CHECK(sat_seen + unsat_seen > 0);
}

TEST_CASE("order-4 extension controls") {
    const Square l1 = mols4_a(), l2 = mols4_b(), l3 = mols4_c();
    REQUIRE(naive_is_orthogonal(l1, l2));
    REQUIRE(naive_is_orthogonal(l1, l3));
    REQUIRE(naive_is_orthogonal(l2, l3));

    SECTION("a pair from a mutually-TRP latin triple extends") {
        const Square p = compose(l1, column_inverse(l2));
        const Square q = compose(l1, column_inverse(l3));
        REQUIRE(naive_is_trp(l1, p));
        REQUIRE(naive_is_trp(l1, q));
        REQUIRE(naive_is_trp(p, q));

        std::set<std::vector<Symbol>> witnesses;
        for (const Square& l : all_latin_squares(4))
            if (naive_is_trp(l, p) && naive_is_trp(l, q))
                witnesses.insert(l.cells());
        REQUIRE(witnesses.count(l1.cells()) == 1);

        EncodedInstance inst = encode_extension(p, q, LatinEncoding::pairwise);
        ModelEnumerator dpll(inst.formula);
        const auto models = dpll.all_models();
        REQUIRE(models.size() == witnesses.size());
        std::set<std::vector<Symbol>> got;
        for (const auto& bits : models) {
            DecodedExtension dec = decode_extension_model(to_model(bits), inst.varmap);
            CHECK(dec.p == p);
            CHECK(dec.q == q);
            CHECK(is_latin(dec.l));
            CHECK(naive_is_trp(dec.l, p));
            CHECK(naive_is_trp(dec.l, q));
            CHECK(dec.z1 == compose(column_inverse(dec.l), p));
            CHECK(dec.z2 == compose(column_inverse(dec.l), q));
            CHECK(is_latin(dec.z1));
            CHECK(is_latin(dec.z2));
            got.insert(dec.l.cells());
        }
        CHECK(got == witnesses);

        EncodedInstance tot = encode_extension(p, q);
        ModelEnumerator tot_dpll(tot.formula);
        CHECK(tot_dpll.satisfiable());
    }

    SECTION("partner extendability matches brute force") {
        const Square p = l1;
        int tested_sat = 0, tested_unsat = 0;
        for (const Square& q : all_latin_squares(4)) {
            if (!naive_is_trp(p, q))
                continue;
            bool witness = false;
            for (const Square& l : all_latin_squares(4))
                if (naive_is_trp(l, p) && naive_is_trp(l, q)) {
                    witness = true;
                    break;
                }
            if ((witness ? tested_sat : tested_unsat) >= 4)
                continue;
            EncodedInstance inst = encode_extension(p, q, LatinEncoding::pairwise);
            ModelEnumerator dpll(inst.formula);
            CHECK(dpll.satisfiable() == witness);
            (witness ? tested_sat : tested_unsat) += 1;
        }
        CHECK(tested_sat + tested_unsat > 0);
        INFO("sat checks " << tested_sat << ", unsat checks " << tested_unsat);
    }
}
