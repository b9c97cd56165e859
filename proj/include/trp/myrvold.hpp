#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "trp/square.hpp"

namespace trp {

enum class Colour : std::uint8_t { white, light, dark };

/// Per-cell colour tags over a square.  White cells are the ones holding
/// symbols 0..3; dark cells mark a choice of two symbol-(>=4) cells per
/// column among the first six columns; everything else is light.
class Colouring {
public:
    Colouring(int n, std::vector<Colour> colour) : n_(n), colour_(std::move(colour)) {
        if (colour_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_))
            throw std::invalid_argument("colouring size does not match order");
    }

    [[nodiscard]] int order() const { return n_; }
    [[nodiscard]] Colour at(int i, int j) const {
        return colour_[static_cast<std::size_t>(i) * n_ + j];
    }

    friend bool operator==(const Colouring&, const Colouring&) = default;

private:
    int n_;
    std::vector<Colour> colour_;
};

/// Transversal row type p_k: k white entries among the last four columns
/// and 2k-2 dark entries among the first six.
struct TransversalTypeP {
    int k;
};

/// Rejects k = 0: a type-p0 row would need -2 dark entries.
[[nodiscard]] inline int dark_count_for_type(int k) {
    if (k < 1 || k > 4)
        throw std::invalid_argument("transversal type k must be in 1..4");
    return 2 * k - 2;
}

/// One of the seven square types R..X: counts[k-1] rows of type p_k.
struct SquareType {
    char label;
    std::array<int, 4> counts;

    friend bool operator==(const SquareType&, const SquareType&) = default;
    friend auto operator<=>(const SquareType& a, const SquareType& b) {
        return a.label <=> b.label;
    }
};

/// All nonnegative solutions of n1+n2+n3+n4 = 10, n1+2*n2+3*n3+4*n4 = 16,
/// labeled R..X in decreasing-n1 (then increasing-n2) order.
[[nodiscard]] inline const std::vector<SquareType>& solve_type_system() {
    static const std::vector<SquareType> types = [] {
        std::vector<std::array<int, 4>> sols;
        for (int n1 = 10; n1 >= 0; --n1)
            for (int n2 = 0; n1 + n2 <= 10; ++n2)
                for (int n3 = 0; n1 + n2 + n3 <= 10; ++n3) {
                    const int n4 = 10 - n1 - n2 - n3;
                    if (n1 + 2 * n2 + 3 * n3 + 4 * n4 == 16)
                        sols.push_back({n1, n2, n3, n4});
                }
        std::vector<SquareType> out;
        char label = 'R';
        for (const auto& counts : sols)
            out.push_back(SquareType{label++, counts});
        return out;
    }();
    return types;
}

[[nodiscard]] inline const SquareType& square_type_by_label(char label) {
    for (const auto& t : solve_type_system())
        if (t.label == label)
            return t;
    throw std::invalid_argument(std::string("unknown square type label: ") + label);
}

enum class CaseStatus : std::uint8_t { eliminated, open };

/// An unordered pair of square types, first <= second in R..X order.
struct PairCase {
    SquareType first;
    SquareType second;
    CaseStatus status;

    [[nodiscard]] std::string id() const { return std::string{first.label, second.label}; }

    friend bool operator==(const PairCase&, const PairCase&) = default;
};

/// The 28 unordered type pairs; the 8 cases Myrvold's counting arguments
/// do not eliminate are marked open.
[[nodiscard]] inline const std::vector<PairCase>& all_pair_cases() {
    static const std::vector<PairCase> cases = [] {
        static constexpr std::array<const char*, 8> open_ids = {
            "SX", "UU", "UW", "UX", "VX", "WW", "WX", "XX"};
        const auto& types = solve_type_system();
        std::vector<PairCase> out;
        for (std::size_t a = 0; a < types.size(); ++a)
            for (std::size_t b = a; b < types.size(); ++b) {
                PairCase pc{types[a], types[b], CaseStatus::eliminated};
                for (const char* id : open_ids)
                    if (pc.id() == id)
                        pc.status = CaseStatus::open;
                out.push_back(pc);
            }
        return out;
    }();
    return cases;
}

[[nodiscard]] inline const PairCase& pair_case_from_id(const std::string& id) {
    for (const auto& pc : all_pair_cases())
        if (pc.id() == id)
            return pc;
    throw std::invalid_argument("unknown pair case id: " + id);
}

/// Row type of `row`: k = white count among columns 6..9.  Throws if the
/// colouring is inconsistent with the square's symbols on this row or the
/// dark count among columns 0..5 is not 2k-2.
[[nodiscard]] inline TransversalTypeP classify_row(const Square& square,
                                                   const Colouring& colouring, int row) {
    const int n = square.order();
    if (n != 10 || colouring.order() != 10)
        throw std::invalid_argument("classify_row: expects order 10");
    int whites_tail = 0;
    int darks_head = 0;
    for (int j = 0; j < n; ++j) {
        const bool white_symbol = square.at(row, j) < 4;
        const Colour c = colouring.at(row, j);
        if (white_symbol != (c == Colour::white))
            throw std::invalid_argument("classify_row: colouring inconsistent with symbols");
        if (c == Colour::dark && j >= 6)
            throw std::invalid_argument("classify_row: dark cell in the last four columns");
        if (j >= 6 && c == Colour::white)
            ++whites_tail;
        if (j < 6 && c == Colour::dark)
            ++darks_head;
    }
    if (whites_tail < 1 || whites_tail > 4)
        throw std::invalid_argument("classify_row: white count " + std::to_string(whites_tail) +
                                    " is not a valid type");
    if (darks_head != dark_count_for_type(whites_tail))
        throw std::invalid_argument("classify_row: dark count " + std::to_string(darks_head) +
                                    " does not match type p" + std::to_string(whites_tail));
    return TransversalTypeP{whites_tail};
}

/// Square type whose counts match the row-type histogram; throws if some
/// row fails to classify or the histogram is not one of the seven types.
[[nodiscard]] inline SquareType classify_square(const Square& square,
                                                const Colouring& colouring) {
    std::array<int, 4> histogram{0, 0, 0, 0};
    for (int i = 0; i < square.order(); ++i)
        ++histogram[classify_row(square, colouring, i).k - 1];
    for (const auto& t : solve_type_system())
        if (t.counts == histogram)
            return t;
    throw std::invalid_argument("classify_square: row-type histogram matches no square type");
}

/// The order-4 Cayley table of Z4.  It has no transversals.
[[nodiscard]] inline const Square& omega1() {
    static const Square s = Square::from_rows({{0, 1, 2, 3},
                                               {1, 2, 3, 0},
                                               {2, 3, 0, 1},
                                               {3, 0, 1, 2}});
    return s;
}

/// The order-4 Cayley table of Z2 x Z2.
[[nodiscard]] inline const Square& omega2() {
    static const Square s = Square::from_rows({{0, 1, 2, 3},
                                               {1, 0, 3, 2},
                                               {2, 3, 0, 1},
                                               {3, 2, 1, 0}});
    return s;
}

/// True iff the symbols < 4 appearing in the last four columns of every
/// row of s, located inside omega by column, occupy pairwise distinct
/// omega rows; i.e. no row of s picks two cells from one omega row.
[[nodiscard]] inline bool omega_compatible(const Square& s, const Square& omega) {
    if (s.order() != 10 || omega.order() != 4)
        throw std::invalid_argument("omega_compatible: expects a 10x10 square and a 4x4 subsquare");
    // row_of[c][k]: the row of omega holding symbol k in column c
    std::array<std::array<std::uint8_t, 4>, 4> row_of{};
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r)
            row_of[c][omega.at(r, c)] = static_cast<std::uint8_t>(r);
    for (int i = 0; i < 10; ++i) {
        std::uint32_t hit = 0;
        for (int j = 6; j < 10; ++j) {
            const Symbol k = s.at(i, j);
            if (k >= 4)
                continue;
            const std::uint8_t r = row_of[j - 6][k];
            if (hit & (1u << r))
                return false;
            hit |= 1u << r;
        }
    }
    return true;
}

}  // namespace trp
