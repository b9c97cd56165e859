#pragma once

#include <algorithm>
#include <bitset>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trp {

using Symbol = std::uint8_t;

/// Immutable n-by-n array of symbols 0..n-1, row-major.  The shared
/// representation of Latin and column-Latin squares; nothing Latin is
/// implied by the type itself, the predicates below classify instances.
class Square {
public:
    static constexpr int max_order = 16;

    Square(int n, std::vector<Symbol> cells) : n_(n), cells_(std::move(cells)) {
        if (n_ < 1 || n_ > max_order)
            throw std::invalid_argument("square order must be in 1.." + std::to_string(max_order));
        if (cells_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_))
            throw std::invalid_argument("cell count does not match order");
        for (Symbol s : cells_)
            if (s >= n_)
                throw std::invalid_argument("cell symbol out of range");
    }

    /// Convenience constructor from explicit rows.
    static Square from_rows(const std::vector<std::vector<int>>& rows) {
        const int n = static_cast<int>(rows.size());
        std::vector<Symbol> cells;
        cells.reserve(static_cast<std::size_t>(n) * n);
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != n)
                throw std::invalid_argument("rows must form a square array");
            for (int v : row) {
                if (v < 0 || v >= n)
                    throw std::invalid_argument("cell symbol out of range");
                cells.push_back(static_cast<Symbol>(v));
            }
        }
        return Square(n, std::move(cells));
    }

    [[nodiscard]] int order() const { return n_; }

    /// Unchecked cell access; indices must be in 0..order()-1.
    [[nodiscard]] Symbol at(int i, int j) const {
        return cells_[static_cast<std::size_t>(i) * n_ + j];
    }

    [[nodiscard]] const std::vector<Symbol>& cells() const { return cells_; }

    friend bool operator==(const Square&, const Square&) = default;
    friend auto operator<=>(const Square& a, const Square& b) {
        if (auto c = a.n_ <=> b.n_; c != 0) return c;
        return a.cells_ <=> b.cells_;
    }

private:
    int n_;
    std::vector<Symbol> cells_;
};

/// A permutation of 0..n-1; image[i] is where i maps.
class Permutation {
public:
    explicit Permutation(std::vector<Symbol> image) : image_(std::move(image)) {
        std::vector<bool> seen(image_.size(), false);
        for (Symbol v : image_) {
            if (v >= image_.size() || seen[v])
                throw std::invalid_argument("image is not a bijection on 0..n-1");
            seen[v] = true;
        }
    }

    static Permutation identity(int n) {
        std::vector<Symbol> image(n);
        for (int i = 0; i < n; ++i)
            image[i] = static_cast<Symbol>(i);
        return Permutation(std::move(image));
    }

    [[nodiscard]] int order() const { return static_cast<int>(image_.size()); }
    [[nodiscard]] Symbol operator()(int i) const { return image_[i]; }

    [[nodiscard]] Permutation inverse() const {
        std::vector<Symbol> inv(image_.size());
        for (std::size_t i = 0; i < image_.size(); ++i)
            inv[image_[i]] = static_cast<Symbol>(i);
        return Permutation(std::move(inv));
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<Symbol> image_;
};

/// One cell per row and per column; rowOfColumn[j] is the row picked in
/// column j, symbols[j] the symbol found there.  Proper transversals have
/// distinct symbols, generalized ones need not.
struct Transversal {
    std::vector<std::uint8_t> row_of_column;
    std::vector<Symbol> symbols;

    [[nodiscard]] int order() const { return static_cast<int>(row_of_column.size()); }
};

[[nodiscard]] inline bool is_column_latin(const Square& s) {
    const int n = s.order();
    for (int j = 0; j < n; ++j) {
        std::uint32_t seen = 0;
        for (int i = 0; i < n; ++i)
            seen |= 1u << s.at(i, j);
        if (seen != (1u << n) - 1)
            return false;
    }
    return true;
}

[[nodiscard]] inline bool is_row_latin(const Square& s) {
    const int n = s.order();
    for (int i = 0; i < n; ++i) {
        std::uint32_t seen = 0;
        for (int j = 0; j < n; ++j)
            seen |= 1u << s.at(i, j);
        if (seen != (1u << n) - 1)
            return false;
    }
    return true;
}

[[nodiscard]] inline bool is_latin(const Square& s) {
    return is_row_latin(s) && is_column_latin(s);
}

/// E, the square with cells[i][j] = i (every column the identity).
[[nodiscard]] inline Square identity_square(int n) {
    std::vector<Symbol> cells(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cells[static_cast<std::size_t>(i) * n + j] = static_cast<Symbol>(i);
    return Square(n, std::move(cells));
}

namespace detail {
inline void require_column_latin(const Square& s, const char* role) {
    if (!is_column_latin(s))
        throw std::invalid_argument(std::string(role) + " must be column-Latin");
}
inline void require_same_order(const Square& a, const Square& b) {
    if (a.order() != b.order())
        throw std::invalid_argument("squares must have the same order");
}
}  // namespace detail

/// Column-wise permutation composition: result[i][j] = f[g[i][j]][j].
[[nodiscard]] inline Square compose(const Square& f, const Square& g) {
    detail::require_same_order(f, g);
    detail::require_column_latin(f, "compose: first argument");
    detail::require_column_latin(g, "compose: second argument");
    const int n = f.order();
    std::vector<Symbol> cells(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cells[static_cast<std::size_t>(i) * n + j] = f.at(g.at(i, j), j);
    return Square(n, std::move(cells));
}

/// Inverts each column permutation; compose(f, column_inverse(f)) = E.
[[nodiscard]] inline Square column_inverse(const Square& f) {
    detail::require_column_latin(f, "column_inverse: argument");
    const int n = f.order();
    std::vector<Symbol> cells(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            cells[static_cast<std::size_t>(f.at(i, j)) * n + j] = static_cast<Symbol>(i);
    return Square(n, std::move(cells));
}

/// True iff the n^2 superimposed symbol pairs (a[i,j], b[i,j]) are all
/// distinct; for column-Latin inputs this is the usual orthogonality.
[[nodiscard]] inline bool is_orthogonal(const Square& a, const Square& b) {
    detail::require_same_order(a, b);
    detail::require_column_latin(a, "is_orthogonal: first argument");
    detail::require_column_latin(b, "is_orthogonal: second argument");
    const int n = a.order();
    std::vector<bool> seen(static_cast<std::size_t>(n) * n, false);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::size_t key = static_cast<std::size_t>(a.at(i, j)) * n + b.at(i, j);
            if (seen[key])
                return false;
            seen[key] = true;
        }
    return true;
}

/// True iff every row of a represents a transversal of b: a[i,j] = b[i',j]
/// and a[i,j'] = b[i',j'] imply j = j'.  Symmetric in a and b.
[[nodiscard]] inline bool is_trp(const Square& a, const Square& b) {
    detail::require_same_order(a, b);
    detail::require_column_latin(a, "is_trp: first argument");
    detail::require_column_latin(b, "is_trp: second argument");
    const int n = a.order();
    // row_in_b[j][k]: the row of b holding symbol k in column j.
    std::vector<std::uint8_t> row_in_b(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            row_in_b[static_cast<std::size_t>(j) * n + b.at(i, j)] = static_cast<std::uint8_t>(i);
    for (int i = 0; i < n; ++i) {
        std::uint32_t hit = 0;
        for (int j = 0; j < n; ++j) {
            const std::uint8_t ip = row_in_b[static_cast<std::size_t>(j) * n + a.at(i, j)];
            if (hit & (1u << ip))
                return false;  // row i of a meets row ip of b in two columns
            hit |= 1u << ip;
        }
    }
    return true;
}

/// All transversals of s in lexicographic order of rowOfColumn.  Default
/// requires s Latin and yields proper transversals; with generalized=true
/// s need only be column-Latin and symbol distinctness is dropped.
[[nodiscard]] inline std::vector<Transversal> enumerate_transversals(const Square& s,
                                                                     bool generalized = false) {
    if (generalized)
        detail::require_column_latin(s, "enumerate_transversals: argument");
    else if (!is_latin(s))
        throw std::invalid_argument("enumerate_transversals: argument must be Latin");
    const int n = s.order();
    std::vector<Transversal> out;
    std::vector<std::uint8_t> rows(n);
    std::vector<Symbol> symbols(n);
    // Column-by-column backtracking over free rows (and, for proper
    // transversals, free symbols), both tracked as 16-bit masks.
    auto recurse = [&](auto&& self, int j, std::uint32_t used_rows,
                       std::uint32_t used_symbols) -> void {
        if (j == n) {
            out.push_back(Transversal{rows, symbols});
            return;
        }
        for (int r = 0; r < n; ++r) {
            if (used_rows & (1u << r))
                continue;
            const Symbol k = s.at(r, j);
            if (!generalized && (used_symbols & (1u << k)))
                continue;
            rows[j] = static_cast<std::uint8_t>(r);
            symbols[j] = k;
            self(self, j + 1, used_rows | (1u << r), used_symbols | (1u << k));
        }
    };
    recurse(recurse, 0, 0, 0);
    return out;
}

/// Number of unordered partitions of the cells of s into n disjoint
/// transversals, by exact cover over the transversal list.  Stops early
/// once limit partitions have been found, when given.
[[nodiscard]] inline long count_mate_decompositions(const Square& s,
                                                    std::optional<long> limit = std::nullopt) {
    if (!is_latin(s))
        throw std::invalid_argument("count_mate_decompositions: argument must be Latin");
    const int n = s.order();
    const int ncells = n * n;
    const auto ts = enumerate_transversals(s);
    using CellMask = std::bitset<Square::max_order * Square::max_order>;
    std::vector<CellMask> masks(ts.size());
    std::vector<std::vector<int>> by_cell(ncells);
    for (std::size_t t = 0; t < ts.size(); ++t) {
        for (int j = 0; j < n; ++j) {
            const int cell = ts[t].row_of_column[j] * n + j;
            masks[t].set(cell);
            by_cell[cell].push_back(static_cast<int>(t));
        }
    }
    long found = 0;
    CellMask covered;
    // Always branch on the lowest uncovered cell, so every unordered
    // partition is produced exactly once.
    auto recurse = [&](auto&& self, int depth) -> bool {
        if (depth == n) {
            ++found;
            return limit && found >= *limit;
        }
        int cell = 0;
        while (covered.test(cell))
            ++cell;
        for (int t : by_cell[cell]) {
            if ((covered & masks[t]).any())
                continue;
            covered |= masks[t];
            const bool stop = self(self, depth + 1);
            covered &= ~masks[t];
            if (stop)
                return true;
        }
        return false;
    };
    recurse(recurse, 0);
    return found;
}

/// Stacks the row representations of a disjoint decomposition of s:
/// row i of the result is parts[i] read off s by column.  The result is a
/// transversal representation of s.
[[nodiscard]] inline Square trp_from_decomposition(const Square& s,
                                                   const std::vector<Transversal>& parts) {
    const int n = s.order();
    if (static_cast<int>(parts.size()) != n)
        throw std::invalid_argument("trp_from_decomposition: need exactly n transversals");
    std::vector<std::uint32_t> used_per_column(n, 0);
    std::vector<Symbol> cells(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        if (parts[i].order() != n)
            throw std::invalid_argument("trp_from_decomposition: transversal order mismatch");
        for (int j = 0; j < n; ++j) {
            const int r = parts[i].row_of_column[j];
            if (used_per_column[j] & (1u << r))
                throw std::invalid_argument("trp_from_decomposition: parts are not disjoint");
            used_per_column[j] |= 1u << r;
            cells[static_cast<std::size_t>(i) * n + j] = s.at(r, j);
        }
    }
    // disjointness in every column of n parts implies full coverage
    return Square(n, std::move(cells));
}

/// Number of row representations that represent a transversal of p and of
/// q simultaneously.
[[nodiscard]] inline long common_transversals(const Square& p, const Square& q) {
    detail::require_same_order(p, q);
    auto reps = [](const Square& s) {
        std::vector<std::vector<Symbol>> rs;
        for (const auto& t : enumerate_transversals(s))
            rs.push_back(t.symbols);
        std::sort(rs.begin(), rs.end());
        return rs;
    };
    const auto rp = reps(p);
    const auto rq = reps(q);
    long count = 0;
    std::size_t a = 0, b = 0;
    while (a < rp.size() && b < rq.size()) {
        if (rp[a] < rq[b])
            ++a;
        else if (rq[b] < rp[a])
            ++b;
        else
            ++count, ++a, ++b;
    }
    return count;
}

/// Square text format: first line "n", then n lines of n space-separated
/// decimal symbols.
[[nodiscard]] inline std::string to_text(const Square& s) {
    std::ostringstream out;
    out << s.order() << '\n';
    for (int i = 0; i < s.order(); ++i) {
        for (int j = 0; j < s.order(); ++j)
            out << (j ? " " : "") << static_cast<int>(s.at(i, j));
        out << '\n';
    }
    return out.str();
}

[[nodiscard]] inline Square square_from_text(std::istream& in) {
    int n = 0;
    if (!(in >> n) || n < 1 || n > Square::max_order)
        throw std::invalid_argument("square text: bad order line");
    std::vector<Symbol> cells;
    cells.reserve(static_cast<std::size_t>(n) * n);
    for (int c = 0; c < n * n; ++c) {
        int v = 0;
        if (!(in >> v))
            throw std::invalid_argument("square text: truncated cell data");
        if (v < 0 || v >= n)
            throw std::invalid_argument("square text: symbol out of range");
        cells.push_back(static_cast<Symbol>(v));
    }
    return Square(n, std::move(cells));
}

[[nodiscard]] inline Square square_from_text(const std::string& text) {
    std::istringstream in(text);
    return square_from_text(in);
}

inline std::ostream& operator<<(std::ostream& out, const Square& s) {
    return out << to_text(s);
}

}  // namespace trp
