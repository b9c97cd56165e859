#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "trp/square.hpp"

namespace trp::testsupport {

/// cells[i][j] = (i + step*j) mod n; step coprime to n gives a Latin square.
inline Square cyclic_square(int n, int step = 1) {
    std::vector<Symbol> cells(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cells[static_cast<std::size_t>(i) * n + j] = static_cast<Symbol>((i + step * j) % n);
    return Square(n, std::move(cells));
}

inline Square c3() { return cyclic_square(3, 1); }
inline Square c3_prime() { return cyclic_square(3, 2); }

/// The GF(4) construction: rows of mols4_a are i XOR j, rows of mols4_b
/// multiply i by the generator first.  The two are orthogonal.
inline Square mols4_a() {
    return Square::from_rows({{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}});
}

inline Square mols4_b() {
    return Square::from_rows({{0, 1, 2, 3}, {2, 3, 0, 1}, {3, 2, 1, 0}, {1, 0, 3, 2}});
}

/// Third member of the GF(4) family (multiplier a^2); a,b,c are three
/// mutually orthogonal Latin squares of order 4.
inline Square mols4_c() {
    return Square::from_rows({{0, 1, 2, 3}, {3, 2, 1, 0}, {1, 0, 3, 2}, {2, 3, 0, 1}});
}

/// All permutations of 0..n-1 in lexicographic order.
inline std::vector<std::vector<Symbol>> all_permutations(int n) {
    std::vector<Symbol> p(n);
    std::iota(p.begin(), p.end(), Symbol{0});
    std::vector<std::vector<Symbol>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// Exhaustive enumeration of Latin squares of order n (576 at n = 4).
inline const std::vector<Square>& all_latin_squares(int n) {
    static std::vector<std::vector<Square>> cache(8);
    auto& slot = cache.at(n);
    if (!slot.empty())
        return slot;
    const auto rows = all_permutations(n);
    std::vector<const std::vector<Symbol>*> chosen;
    std::vector<std::uint32_t> col_used(n, 0);
    auto recurse = [&](auto&& self) -> void {
        if (static_cast<int>(chosen.size()) == n) {
            std::vector<Symbol> cells;
            for (const auto* row : chosen)
                cells.insert(cells.end(), row->begin(), row->end());
            slot.emplace_back(n, std::move(cells));
            return;
        }
        for (const auto& row : rows) {
            bool ok = true;
            for (int j = 0; j < n && ok; ++j)
                ok = !(col_used[j] & (1u << row[j]));
            if (!ok)
                continue;
            for (int j = 0; j < n; ++j)
                col_used[j] |= 1u << row[j];
            chosen.push_back(&row);
            self(self);
            chosen.pop_back();
            for (int j = 0; j < n; ++j)
                col_used[j] &= ~(1u << row[j]);
        }
    };
    recurse(recurse);
    return slot;
}

/// Independent random column permutations per column.
inline Square random_column_latin(int n, std::mt19937& rng) {
    std::vector<Symbol> cells(static_cast<std::size_t>(n) * n);
    std::vector<Symbol> col(n);
    for (int j = 0; j < n; ++j) {
        std::iota(col.begin(), col.end(), Symbol{0});
        std::shuffle(col.begin(), col.end(), rng);
        for (int i = 0; i < n; ++i)
            cells[static_cast<std::size_t>(i) * n + j] = col[i];
    }
    return Square(n, std::move(cells));
}

/// Definition-level orthogonality: no two distinct cells carry the same
/// superimposed pair.  O(n^4) oracle.
inline bool naive_is_orthogonal(const Square& a, const Square& b) {
    const int n = a.order();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int i2 = 0; i2 < n; ++i2)
                for (int j2 = 0; j2 < n; ++j2) {
                    if (i == i2 && j == j2)
                        continue;
                    if (a.at(i, j) == a.at(i2, j2) && b.at(i, j) == b.at(i2, j2))
                        return false;
                }
    return true;
}

/// Definition-level TRP check: a[i,j]=b[i',j] and a[i,j']=b[i',j'] force
/// j=j'.  O(n^4) oracle.
inline bool naive_is_trp(const Square& a, const Square& b) {
    const int n = a.order();
    for (int i = 0; i < n; ++i)
        for (int i2 = 0; i2 < n; ++i2)
            for (int j = 0; j < n; ++j)
                for (int j2 = 0; j2 < n; ++j2) {
                    if (j == j2)
                        continue;
                    if (a.at(i, j) == b.at(i2, j) && a.at(i, j2) == b.at(i2, j2))
                        return false;
                }
    return true;
}

/// Permutation-filter transversal enumeration: try all n! row_of_column
/// maps, keep the ones whose symbols are distinct (unless generalized).
/// Results arrive in lexicographic row_of_column order.
inline std::vector<std::vector<std::uint8_t>> naive_transversals(const Square& s,
                                                                 bool generalized = false) {
    const int n = s.order();
    std::vector<std::uint8_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), std::uint8_t{0});
    std::vector<std::vector<std::uint8_t>> out;
    do {
        std::uint32_t symbols = 0;
        bool distinct = true;
        for (int j = 0; j < n; ++j) {
            const std::uint32_t bit = 1u << s.at(sigma[j], j);
            if (symbols & bit)
                distinct = false;
            symbols |= bit;
        }
        if (generalized || distinct)
            out.push_back(sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

/// Combination search over the transversal list for unordered partitions
/// of the cells into n disjoint transversals.
inline long naive_decomposition_count(const Square& s) {
    const int n = s.order();
    const auto ts = naive_transversals(s);
    std::vector<std::uint64_t> masks;
    for (const auto& t : ts) {
        std::uint64_t m = 0;
        for (int j = 0; j < n; ++j)
            m |= std::uint64_t{1} << (t[j] * n + j);
        masks.push_back(m);
    }
    long found = 0;
    auto recurse = [&](auto&& self, std::size_t start, int depth, std::uint64_t covered) -> void {
        if (depth == n) {
            ++found;
            return;
        }
        for (std::size_t t = start; t < masks.size(); ++t)
            if (!(covered & masks[t]))
                self(self, t + 1, depth + 1, covered | masks[t]);
    };
    recurse(recurse, 0, 0, 0);
    return found;
}

/// Frozen order-10 Latin TRP pair: trp10_p was generated by randomised
/// backtracking, trp10_q stacks one of its transversal decompositions.
inline Square trp10_p() {
    return Square::from_rows({{3, 7, 4, 2, 5, 0, 9, 1, 8, 6},
                              {6, 9, 8, 3, 0, 7, 5, 2, 4, 1},
                              {5, 0, 3, 7, 9, 1, 4, 6, 2, 8},
                              {4, 8, 1, 0, 6, 2, 3, 5, 7, 9},
                              {2, 3, 0, 8, 1, 9, 7, 4, 6, 5},
                              {1, 6, 9, 4, 8, 3, 0, 7, 5, 2},
                              {0, 4, 6, 9, 2, 5, 8, 3, 1, 7},
                              {7, 2, 5, 6, 3, 8, 1, 9, 0, 4},
                              {9, 5, 7, 1, 4, 6, 2, 8, 3, 0},
                              {8, 1, 2, 5, 7, 4, 6, 0, 9, 3}});
}

inline Square trp10_q() {
    return Square::from_rows({{3, 8, 9, 5, 0, 6, 1, 4, 2, 7},
                              {9, 7, 2, 0, 8, 1, 5, 3, 6, 4},
                              {2, 5, 4, 6, 9, 3, 8, 0, 7, 1},
                              {8, 4, 5, 2, 1, 7, 0, 6, 3, 9},
                              {4, 1, 6, 3, 5, 9, 2, 7, 0, 8},
                              {7, 9, 3, 8, 4, 0, 6, 5, 1, 2},
                              {1, 2, 0, 7, 6, 5, 9, 8, 4, 3},
                              {6, 0, 7, 4, 2, 8, 3, 1, 9, 5},
                              {5, 6, 1, 9, 3, 4, 7, 2, 8, 0},
                              {0, 3, 8, 1, 7, 2, 4, 9, 5, 6}});
}

}  // namespace trp::testsupport
