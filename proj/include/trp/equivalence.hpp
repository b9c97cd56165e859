#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trp/record.hpp"
#include "trp/square.hpp"

namespace trp {

/// Orthogonal-pair form of a transversal pair: (compose(columnInverse(p), q), q).
[[nodiscard]] inline std::pair<Square, Square> to_orthogonal_pair(const Square& p,
                                                                  const Square& q) {
    if (!is_latin(p))
        throw std::invalid_argument("to_orthogonal_pair: p is not latin");
    if (!is_latin(q))
        throw std::invalid_argument("to_orthogonal_pair: q is not latin");
    if (!is_trp(p, q))
        throw std::invalid_argument("to_orthogonal_pair: (p, q) is not a transversal pair");
    return {compose(column_inverse(p), q), q};
}

/// n² rows of k=4 symbols: row index, column index, symbol of a, symbol of b.
struct OrthogonalArray {
    int n = 0;
    static constexpr int k = 4;
    std::vector<std::array<int, 4>> rows;
};

[[nodiscard]] inline OrthogonalArray build_orthogonal_array(const Square& a, const Square& b) {
    if (!is_latin(a) || !is_latin(b))
        throw std::invalid_argument("build_orthogonal_array: inputs must be latin");
    if (!is_orthogonal(a, b))
        throw std::invalid_argument("build_orthogonal_array: inputs are not orthogonal");
    OrthogonalArray o;
    o.n = a.order();
    o.rows.reserve(static_cast<std::size_t>(o.n) * o.n);
    for (int i = 0; i < o.n; ++i)
        for (int j = 0; j < o.n; ++j)
            o.rows.push_back({i, j, a.at(i, j), b.at(i, j)});
    return o;
}

/// Incidence graph of an orthogonal array.  Vertices come in three colour
/// classes laid out contiguously: type 1 (one per column, 0..k-1), type 2
/// (one per column/symbol, k + c*n + s), type 3 (one per array row,
/// k + k*n + r).  Type 1 joins its column's symbols; a row joins the k
/// symbols it contains.
struct PairGraph {
    int n = 0;
    int k = 0;
    std::vector<std::vector<int>> adj;

    [[nodiscard]] int vertex_count() const { return k + k * n + n * n; }
    [[nodiscard]] long edge_count() const {
        long twice = 0;
        for (const auto& nb : adj)
            twice += static_cast<long>(nb.size());
        return twice / 2;
    }
    /// 0, 1, 2 for types 1, 2, 3.
    [[nodiscard]] int vertex_class(int v) const {
        return v < k ? 0 : (v < k + k * n ? 1 : 2);
    }
};

[[nodiscard]] inline PairGraph build_graph(const OrthogonalArray& o) {
    PairGraph g;
    g.n = o.n;
    g.k = OrthogonalArray::k;
    if (o.rows.size() != static_cast<std::size_t>(o.n) * o.n)
        throw std::invalid_argument("build_graph: array must have n^2 rows");
    g.adj.assign(static_cast<std::size_t>(g.vertex_count()), {});
    const auto symbol_vertex = [&](int c, int s) { return g.k + c * g.n + s; };
    for (int c = 0; c < g.k; ++c)
        for (int s = 0; s < g.n; ++s) {
            g.adj[c].push_back(symbol_vertex(c, s));
            g.adj[symbol_vertex(c, s)].push_back(c);
        }
    const int row_base = g.k + g.k * g.n;
    for (std::size_t r = 0; r < o.rows.size(); ++r)
        for (int c = 0; c < g.k; ++c) {
            const int s = o.rows[r][c];
            if (s < 0 || s >= g.n)
                throw std::invalid_argument("build_graph: symbol out of range");
            g.adj[row_base + static_cast<int>(r)].push_back(symbol_vertex(c, s));
            g.adj[symbol_vertex(c, s)].push_back(row_base + static_cast<int>(r));
        }
    for (auto& nb : g.adj)
        std::sort(nb.begin(), nb.end());
    return g;
}

/// Class sizes, then the adjacency bitmap of the winning vertex order.
/// Byte equality is the isomorphism test.
struct CanonicalCertificate {
    std::vector<std::uint8_t> bytes;
    std::vector<int> order;  // order[position] = original vertex

    [[nodiscard]] std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out;
        out.reserve(bytes.size() * 2);
        for (std::uint8_t b : bytes) {
            out.push_back(digits[b >> 4]);
            out.push_back(digits[b & 0xf]);
        }
        return out;
    }

    friend bool operator==(const CanonicalCertificate& a, const CanonicalCertificate& b) {
        return a.bytes == b.bytes;
    }
};

namespace detail {

/// Individualization-refinement search for the lexicographically smallest
/// adjacency bitmap over all leaves.  Refinement orders cells by sorted
/// (old colour, neighbour-colour multiset) signatures, so splitting never
/// reorders existing cells; once the leading cells are singletons their
/// mutual bitmap bits are frozen for the whole subtree, which makes the
/// prefix comparison against the best leaf a sound prune.
class CanonSearch {
public:
    explicit CanonSearch(const PairGraph& g) : g_(g), vcount_(g.vertex_count()) {
        adjacency_.assign(static_cast<std::size_t>(vcount_) * vcount_, 0);
        std::size_t max_degree = 0;
        for (int v = 0; v < vcount_; ++v) {
            max_degree = std::max(max_degree, g.adj[static_cast<std::size_t>(v)].size());
            for (int u : g.adj[v])
                adjacency_[static_cast<std::size_t>(v) * vcount_ + u] = 1;
        }
        key_stride_ = max_degree + 1;
        keys_.assign(static_cast<std::size_t>(vcount_) * key_stride_, -1);
        touched_.assign(static_cast<std::size_t>(vcount_), 0);
    }

    [[nodiscard]] CanonicalCertificate run() {
        Partition part;
        part.order.resize(static_cast<std::size_t>(vcount_));
        std::iota(part.order.begin(), part.order.end(), 0);
        part.cstart.resize(static_cast<std::size_t>(vcount_));
        part.csize.assign(static_cast<std::size_t>(vcount_), 0);
        for (int v = 0; v < vcount_; ++v) {
            const int starts[3] = {0, g_.k, g_.k + g_.k * g_.n};
            part.cstart[static_cast<std::size_t>(v)] = starts[g_.vertex_class(v)];
            ++part.csize[static_cast<std::size_t>(part.cstart[static_cast<std::size_t>(v)])];
        }
        std::vector<int> all(part.order);
        search(std::move(part), std::move(all));
        CanonicalCertificate cert;
        cert.order = std::move(best_order_);
        cert.bytes.reserve(6 + best_bits_.size());
        for (int size : {g_.k, g_.k * g_.n, g_.n * g_.n}) {
            cert.bytes.push_back(static_cast<std::uint8_t>(size >> 8));
            cert.bytes.push_back(static_cast<std::uint8_t>(size & 0xff));
        }
        cert.bytes.insert(cert.bytes.end(), best_bits_.begin(), best_bits_.end());
        return cert;
    }

private:
    [[nodiscard]] bool adjacent(int a, int b) const {
        return adjacency_[static_cast<std::size_t>(a) * vcount_ + b] != 0;
    }

    // Vertices grouped by cell; a cell's colour is its start position, so a
    // split renames only the broken tail and everything else keeps its id.
    struct Partition {
        std::vector<int> order;   // cells in colour order
        std::vector<int> cstart;  // cstart[v] = start position of v's cell
        std::vector<int> csize;   // csize[p] = cell size where p is a start
    };

    // One synchronous round re-keys just the cells holding a vertex whose
    // colour changed, or a neighbour of one; every other key is value-stable
    // and its cell provably does not split.  Keys live in one flat buffer,
    // -1 padded so shorter keys sort first, exactly as the length tiebreak
    // of a vector compare would place them.
    void refine(Partition& part, std::vector<int>& changed) {
        const std::size_t stride = key_stride_;
        std::vector<int> cells;
        std::vector<std::pair<int, int>> frags;  // (start, size) of split parts
        while (!changed.empty()) {
            cells.clear();
            const auto mark = [&](int u) {
                const int s = part.cstart[static_cast<std::size_t>(u)];
                if (!touched_[static_cast<std::size_t>(s)] &&
                    part.csize[static_cast<std::size_t>(s)] > 1) {
                    touched_[static_cast<std::size_t>(s)] = 1;
                    cells.push_back(s);
                }
            };
            for (int v : changed) {
                mark(v);
                for (int u : g_.adj[static_cast<std::size_t>(v)])
                    mark(u);
            }
            frags.clear();
            for (int s : cells) {
                const int m = part.csize[static_cast<std::size_t>(s)];
                for (int t = s; t < s + m; ++t) {
                    const int v = part.order[static_cast<std::size_t>(t)];
                    int* key = keys_.data() + static_cast<std::size_t>(v) * stride;
                    key[0] = s;
                    const auto& nb = g_.adj[static_cast<std::size_t>(v)];
                    for (std::size_t i = 0; i < nb.size(); ++i)
                        key[i + 1] = part.cstart[static_cast<std::size_t>(nb[i])];
                    std::sort(key + 1, key + 1 + nb.size());
                }
                std::sort(part.order.begin() + s, part.order.begin() + s + m,
                          [&](int a, int b) {
                              const int* ka = keys_.data() + static_cast<std::size_t>(a) * stride;
                              const int* kb = keys_.data() + static_cast<std::size_t>(b) * stride;
                              return std::lexicographical_compare(ka, ka + stride, kb, kb + stride);
                          });
                int begin = s;
                for (int t = s + 1; t < s + m; ++t) {
                    const int* ka = keys_.data() +
                                    static_cast<std::size_t>(
                                        part.order[static_cast<std::size_t>(t - 1)]) *
                                        stride;
                    const int* kb = keys_.data() +
                                    static_cast<std::size_t>(
                                        part.order[static_cast<std::size_t>(t)]) *
                                        stride;
                    if (!std::equal(ka, ka + stride, kb)) {
                        frags.emplace_back(begin, t - begin);
                        begin = t;
                    }
                }
                if (begin != s)
                    frags.emplace_back(begin, s + m - begin);
            }
            for (int s : cells)
                touched_[static_cast<std::size_t>(s)] = 0;
            changed.clear();
            for (const auto& [pos, size] : frags) {
                part.csize[static_cast<std::size_t>(pos)] = size;
                for (int t = pos; t < pos + size; ++t) {
                    const int v = part.order[static_cast<std::size_t>(t)];
                    if (part.cstart[static_cast<std::size_t>(v)] != pos) {
                        part.cstart[static_cast<std::size_t>(v)] = pos;
                        changed.push_back(v);
                    }
                }
            }
        }
    }

    /// Compare the frozen bitmap prefix against the best leaf: -1 it can
    /// only improve, +1 it can only lose, 0 undecided.
    [[nodiscard]] int compare_prefix(const std::vector<int>& order, int len) const {
        std::size_t bit = 0;
        for (int b = 1; b < len; ++b)
            for (int a = 0; a < b; ++a, ++bit) {
                const bool ours = adjacent(order[static_cast<std::size_t>(a)],
                                           order[static_cast<std::size_t>(b)]);
                const bool best = (best_bits_[bit >> 3] >> (7 - (bit & 7))) & 1;
                if (ours != best)
                    return ours ? +1 : -1;
            }
        return 0;
    }

    void search(Partition part, std::vector<int> changed) {
        refine(part, changed);
        int prefix = 0;  // leading singleton cells freeze their bitmap bits
        while (prefix < vcount_ && part.csize[static_cast<std::size_t>(prefix)] == 1)
            ++prefix;
        if (!best_bits_.empty() && compare_prefix(part.order, prefix) > 0)
            return;
        if (prefix == vcount_) {
            leaf(part.order);
            return;
        }
        // first largest non-singleton cell
        int target = -1;
        int largest = 1;
        for (int s = prefix; s < vcount_; s += part.csize[static_cast<std::size_t>(s)])
            if (part.csize[static_cast<std::size_t>(s)] > largest) {
                target = s;
                largest = part.csize[static_cast<std::size_t>(s)];
            }
        std::vector<int> explored;
        for (int v = 0; v < vcount_; ++v) {
            if (part.cstart[static_cast<std::size_t>(v)] != target)
                continue;
            if (in_explored_orbit(v, explored))
                continue;
            explored.push_back(v);
            Partition child(part);
            for (int t = target;; ++t)
                if (child.order[static_cast<std::size_t>(t)] == v) {
                    std::swap(child.order[static_cast<std::size_t>(t)],
                              child.order[static_cast<std::size_t>(target)]);
                    break;
                }
            child.csize[static_cast<std::size_t>(target)] = 1;
            child.csize[static_cast<std::size_t>(target) + 1] = largest - 1;
            std::vector<int> rest;
            rest.reserve(static_cast<std::size_t>(largest) - 1);
            for (int t = target + 1; t < target + largest; ++t) {
                const int u = child.order[static_cast<std::size_t>(t)];
                child.cstart[static_cast<std::size_t>(u)] = target + 1;
                rest.push_back(u);
            }
            path_.push_back(v);
            search(std::move(child), std::move(rest));
            path_.pop_back();
        }
    }

    /// Candidate v is redundant when some discovered automorphism that fixes
    /// the individualized path pointwise maps it into an explored sibling:
    /// the two subtrees then carry exactly the same leaf bitmaps.
    [[nodiscard]] bool in_explored_orbit(int v, const std::vector<int>& explored) const {
        if (explored.empty() || autos_.empty())
            return false;
        std::vector<int> parent(static_cast<std::size_t>(vcount_));
        for (int u = 0; u < vcount_; ++u)
            parent[static_cast<std::size_t>(u)] = u;
        auto find = [&parent](int u) {
            while (parent[static_cast<std::size_t>(u)] != u) {
                parent[static_cast<std::size_t>(u)] =
                    parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(u)])];
                u = parent[static_cast<std::size_t>(u)];
            }
            return u;
        };
        for (const auto& perm : autos_) {
            bool fixes_path = true;
            for (int w : path_)
                if (perm[static_cast<std::size_t>(w)] != w) {
                    fixes_path = false;
                    break;
                }
            if (!fixes_path)
                continue;
            for (int u = 0; u < vcount_; ++u) {
                const int a = find(u);
                const int b = find(perm[static_cast<std::size_t>(u)]);
                if (a != b)
                    parent[static_cast<std::size_t>(a)] = b;
            }
        }
        const int root = find(v);
        for (int u : explored)
            if (find(u) == root)
                return true;
        return false;
    }

    void leaf(const std::vector<int>& order) {
        const std::size_t bits = static_cast<std::size_t>(vcount_) *
                                 static_cast<std::size_t>(vcount_ - 1) / 2;
        std::vector<std::uint8_t> packed((bits + 7) / 8, 0);
        std::size_t bit = 0;
        for (std::size_t b = 1; b < order.size(); ++b)
            for (std::size_t a = 0; a < b; ++a, ++bit)
                if (adjacent(order[a], order[b]))
                    packed[bit >> 3] |= static_cast<std::uint8_t>(1u << (7 - (bit & 7)));
        if (best_bits_.empty() || packed < best_bits_) {
            best_bits_ = std::move(packed);
            best_order_ = order;
        } else if (packed == best_bits_ && autos_.size() < 64) {
            // two orders with identical bitmaps: best_order ∘ order⁻¹ is an
            // automorphism, usable for orbit pruning.
            std::vector<int> perm(static_cast<std::size_t>(vcount_));
            for (int i = 0; i < vcount_; ++i)
                perm[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
                    best_order_[static_cast<std::size_t>(i)];
            autos_.push_back(std::move(perm));
        }
    }

    const PairGraph& g_;
    int vcount_;
    std::vector<std::uint8_t> adjacency_;
    std::size_t key_stride_ = 0;
    std::vector<int> keys_;
    std::vector<std::uint8_t> touched_;
    std::vector<std::uint8_t> best_bits_;
    std::vector<int> best_order_;
    std::vector<std::vector<int>> autos_;
    std::vector<int> path_;
};

}  // namespace detail

[[nodiscard]] inline CanonicalCertificate canonicalize(const PairGraph& g) {
    return detail::CanonSearch(g).run();
}

/// Certificate of a transversal pair via its orthogonal-pair graph.
[[nodiscard]] inline CanonicalCertificate pair_certificate(const Square& p, const Square& q) {
    const auto [a, b] = to_orthogonal_pair(p, q);
    return canonicalize(build_graph(build_orthogonal_array(a, b)));
}

/// Relabeled copy: vertex v becomes perm[v].  The permutation must keep
/// every vertex in its colour class, else certificates are not preserved.
[[nodiscard]] inline PairGraph permuted_graph(const PairGraph& g, const std::vector<int>& perm) {
    const int vcount = g.vertex_count();
    if (static_cast<int>(perm.size()) != vcount)
        throw std::invalid_argument("permuted_graph: permutation size mismatch");
    std::vector<bool> seen(static_cast<std::size_t>(vcount), false);
    for (int v = 0; v < vcount; ++v) {
        const int img = perm[static_cast<std::size_t>(v)];
        if (img < 0 || img >= vcount || seen[static_cast<std::size_t>(img)])
            throw std::invalid_argument("permuted_graph: not a permutation");
        seen[static_cast<std::size_t>(img)] = true;
        if (g.vertex_class(v) != g.vertex_class(img))
            throw std::invalid_argument("permuted_graph: permutation crosses colour classes");
    }
    PairGraph out;
    out.n = g.n;
    out.k = g.k;
    out.adj.assign(static_cast<std::size_t>(vcount), {});
    for (int v = 0; v < vcount; ++v)
        for (int u : g.adj[static_cast<std::size_t>(v)])
            out.adj[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])].push_back(
                perm[static_cast<std::size_t>(u)]);
    for (auto& nb : out.adj)
        std::sort(nb.begin(), nb.end());
    return out;
}

/// DIMACS-style export for cross-checks: "p edge V E", one "n first last"
/// line per colour class (1-based inclusive), then "e u v" lines.
inline void write_graph(std::ostream& out, const PairGraph& g) {
    out << "p edge " << g.vertex_count() << ' ' << g.edge_count() << '\n';
    out << "n 1 " << g.k << '\n';
    out << "n " << g.k + 1 << ' ' << g.k + g.k * g.n << '\n';
    out << "n " << g.k + g.k * g.n + 1 << ' ' << g.vertex_count() << '\n';
    for (int v = 0; v < g.vertex_count(); ++v)
        for (int u : g.adj[static_cast<std::size_t>(v)])
            if (v < u)
                out << "e " << v + 1 << ' ' << u + 1 << '\n';
}

struct CertificateClass {
    std::string certificate;  // hex
    std::vector<std::size_t> members;
};

/// Group verified SAT records by pair certificate, recomputing it when a
/// record carries no stats.  Classes appear in first-member order.
[[nodiscard]] inline std::vector<CertificateClass> dedupe(
    const std::vector<SolveRecord>& records) {
    std::vector<CertificateClass> classes;
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const SolveRecord& r = records[i];
        if (r.outcome != Outcome::sat || !r.verified || !r.p || !r.q)
            continue;
        const std::string cert = r.stats && !r.stats->certificate.empty()
                                     ? r.stats->certificate
                                     : pair_certificate(*r.p, *r.q).hex();
        auto [it, fresh] = index.try_emplace(cert, classes.size());
        if (fresh)
            classes.push_back(CertificateClass{cert, {}});
        classes[it->second].members.push_back(i);
    }
    return classes;
}

}  // namespace trp
