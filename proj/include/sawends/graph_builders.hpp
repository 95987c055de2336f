#pragma once

#include <charconv>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sawends/finite_group.hpp"
#include "sawends/graph_core.hpp"

namespace sawends {

// Lattice keys are "x,y" in decimal; cylinder keys keep y in [0, width).

inline VertexKey lattice_key(long x, long y) {
    return VertexKey(std::to_string(x) + "," + std::to_string(y));
}

inline std::pair<long, long> parse_lattice_key(const VertexKey& k) {
    const std::string& s = k.bytes();
    auto comma = s.find(',');
    if (comma == std::string::npos) throw InvalidVertex("malformed lattice key: " + s);
    long x = 0, y = 0;
    auto r1 = std::from_chars(s.data(), s.data() + comma, x);
    auto r2 = std::from_chars(s.data() + comma + 1, s.data() + s.size(), y);
    if (r1.ec != std::errc{} || r1.ptr != s.data() + comma || r2.ec != std::errc{} ||
        r2.ptr != s.data() + s.size() || lattice_key(x, y) != k)
        throw InvalidVertex("malformed lattice key: " + s);
    return {x, y};
}

inline GraphOracle build_square_lattice() {
    return GraphOracle(
        "square",
        [](const VertexKey& v) {
            auto [x, y] = parse_lattice_key(v);
            return std::vector<VertexKey>{lattice_key(x - 1, y), lattice_key(x + 1, y), lattice_key(x, y - 1),
                                          lattice_key(x, y + 1)};
        },
        4, Transitivity::vertex_transitive, 1);
}

/// Honeycomb in brick-wall coordinates: horizontal neighbors always, plus
/// (x, y+1) when x+y is even and (x, y-1) when it is odd.
inline GraphOracle build_hexagonal_lattice() {
    return GraphOracle(
        "hexagonal",
        [](const VertexKey& v) {
            auto [x, y] = parse_lattice_key(v);
            long dy = ((x + y) % 2 == 0) ? 1 : -1;
            return std::vector<VertexKey>{lattice_key(x - 1, y), lattice_key(x + 1, y), lattice_key(x, y + dy)};
        },
        3, Transitivity::vertex_transitive, 1);
}

/// The quotient Z x Z_width of the square grid.
inline GraphOracle build_cylinder(int width) {
    if (width < 3) throw UnsupportedParameter("cylinder width must be at least 3 (smaller widths give multigraphs)");
    const long w = width;
    return GraphOracle(
        "cylinder-" + std::to_string(width),
        [w](const VertexKey& v) {
            auto [x, y] = parse_lattice_key(v);
            if (y < 0 || y >= w) throw InvalidVertex("cylinder row out of range: " + v.bytes());
            return std::vector<VertexKey>{lattice_key(x - 1, y), lattice_key(x + 1, y),
                                          lattice_key(x, (y + w - 1) % w), lattice_key(x, (y + 1) % w)};
        },
        4, Transitivity::vertex_transitive, 1);
}

/// A rooted graph used as a free-product factor. When `group` is present,
/// the graph is a Cayley graph of that group with vertex i of
/// finite_vertex_list being element i and the root the identity.
struct RootedGraph {
    GraphOracle oracle;
    VertexKey root;
    std::optional<std::vector<VertexKey>> finite_vertex_list;
    std::optional<FiniteGroup> group;
};

/// Explicit finite graph on vertices "0".."n-1" rooted at "0".
inline RootedGraph explicit_factor(int n, const std::vector<std::pair<int, int>>& edges, std::string name) {
    if (n < 1) throw UnsupportedParameter("factor graph needs at least one vertex");
    auto adj = std::make_shared<std::vector<std::vector<VertexKey>>>(n);
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw UnsupportedParameter("bad factor edge");
        (*adj)[a].push_back(VertexKey(std::to_string(b)));
        (*adj)[b].push_back(VertexKey(std::to_string(a)));
    }
    int dmax = 0;
    for (auto& l : *adj) dmax = std::max<int>(dmax, static_cast<int>(l.size()));
    std::vector<VertexKey> verts;
    for (int i = 0; i < n; ++i) verts.emplace_back(std::to_string(i));
    GraphOracle g(
        std::move(name),
        [adj, n](const VertexKey& v) {
            int i = -1;
            auto r = std::from_chars(v.bytes().data(), v.bytes().data() + v.bytes().size(), i);
            if (r.ec != std::errc{} || i < 0 || i >= n || std::to_string(i) != v.bytes())
                throw InvalidVertex("factor vertex out of range: " + v.bytes());
            return (*adj)[i];
        },
        std::max(dmax, 1), Transitivity::unknown, n);
    return RootedGraph{g, VertexKey("0"), verts, std::nullopt};
}

/// Cycle C_k (k >= 3) or K_2 (k = 2) as the Cayley graph of Z_k with
/// generators +-1.
inline RootedGraph cycle_factor(int k) {
    if (k < 2) throw UnsupportedParameter("cycle factor needs k >= 2");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < k; ++i)
        if (k > 2 || i == 0) edges.emplace_back(i, (i + 1) % k);
    auto g = explicit_factor(k, edges, k == 2 ? "K2" : "C" + std::to_string(k));
    g.group = FiniteGroup::cyclic(k);
    return g;
}

/// Complete graph K_k as the Cayley graph of Z_k with all nonzero generators.
inline RootedGraph complete_factor(int k) {
    if (k < 2) throw UnsupportedParameter("complete factor needs k >= 2");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) edges.emplace_back(i, j);
    auto g = explicit_factor(k, edges, "K" + std::to_string(k));
    g.group = FiniteGroup::cyclic(k);
    return g;
}

/// Free product G1 * G2 of finite rooted graphs. Vertices are alternating
/// words x_1 ... x_n of non-root factor vertices, keyed "o" for the root and
/// otherwise letters "a<i>" (factor 1) / "b<i>" (factor 2) joined by '.',
/// where i indexes the factor's finite_vertex_list.
class FreeProductGraph {
public:
    struct Letter {
        int factor;  // 0 or 1
        int vertex;  // index into the factor's vertex list, never the root
        friend bool operator==(const Letter&, const Letter&) = default;
    };
    using Word = std::vector<Letter>;

    FreeProductGraph(const RootedGraph& g1, const RootedGraph& g2) {
        const RootedGraph* gs[2] = {&g1, &g2};
        for (int f = 0; f < 2; ++f) {
            const auto& rg = *gs[f];
            if (!rg.finite_vertex_list)
                throw UnsupportedParameter("free-product factors must be finite");
            if (rg.finite_vertex_list->size() < 2)
                throw UnsupportedParameter("free-product factors need at least two vertices");
            auto& fac = factors_[f];
            fac.keys = *rg.finite_vertex_list;
            for (std::size_t i = 0; i < fac.keys.size(); ++i) fac.index.emplace(fac.keys[i], static_cast<int>(i));
            auto rit = fac.index.find(rg.root);
            if (rit == fac.index.end()) throw UnsupportedParameter("factor root not in vertex list");
            fac.root = rit->second;
            fac.adj.resize(fac.keys.size());
            for (std::size_t i = 0; i < fac.keys.size(); ++i) {
                for (auto& y : rg.oracle.neighbors(fac.keys[i])) {
                    auto it = fac.index.find(y);
                    if (it == fac.index.end()) throw UnsupportedParameter("factor edge leaves vertex list");
                    fac.adj[i].push_back(it->second);
                }
            }
            fac.group = rg.group;
            if (fac.group && (fac.group->order() != static_cast<int>(fac.keys.size()) ||
                              fac.group->identity() != fac.root))
                throw UnsupportedParameter("factor group must index the vertex list with the root as identity");
            fac.name = rg.oracle.name();
        }
        // A word ending in factor f sees its last letter's factor adjacency
        // plus the root adjacency of the other factor.
        auto root_degree = [&](int f) { return static_cast<int>(factors_[f].adj[factors_[f].root].size()); };
        int dmax = root_degree(0) + root_degree(1);
        for (int f = 0; f < 2; ++f)
            for (auto& l : factors_[f].adj)
                dmax = std::max(dmax, static_cast<int>(l.size()) + root_degree(1 - f));
        std::shared_ptr<const FreeProductGraph> self(new FreeProductGraph(*this));
        self_ = self;
        oracle_ = GraphOracle(
            factors_[0].name + "*" + factors_[1].name,
            [self](const VertexKey& v) { return self->neighbor_keys(v); },
            dmax, Transitivity::quasi_transitive,
            static_cast<int>(factors_[0].keys.size() + factors_[1].keys.size() - 2));
    }

    const GraphOracle& oracle() const noexcept { return oracle_; }
    static VertexKey root() { return VertexKey("o"); }

    VertexKey key(const Word& w) const {
        if (w.empty()) return root();
        std::string s;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) s += '.';
            s += w[i].factor == 0 ? 'a' : 'b';
            s += std::to_string(w[i].vertex);
        }
        return VertexKey(std::move(s));
    }

    Word word(const VertexKey& k) const {
        const std::string& s = k.bytes();
        Word w;
        if (s == "o") return w;
        std::size_t pos = 0;
        while (pos < s.size()) {
            if (!w.empty()) {
                if (s[pos] != '.') throw InvalidVertex("malformed free-product key: " + s);
                ++pos;
            }
            if (pos >= s.size() || (s[pos] != 'a' && s[pos] != 'b'))
                throw InvalidVertex("malformed free-product key: " + s);
            int f = s[pos++] == 'a' ? 0 : 1;
            int v = 0;
            auto r = std::from_chars(s.data() + pos, s.data() + s.size(), v);
            if (r.ec != std::errc{}) throw InvalidVertex("malformed free-product key: " + s);
            pos = static_cast<std::size_t>(r.ptr - s.data());
            if (v < 0 || v >= static_cast<int>(factors_[f].keys.size()) || v == factors_[f].root)
                throw InvalidVertex("letter is not a non-root factor vertex: " + s);
            if (!w.empty() && w.back().factor == f) throw InvalidVertex("letters do not alternate: " + s);
            w.push_back({f, v});
        }
        if (key(w) != k) throw InvalidVertex("non-canonical free-product key: " + s);
        return w;
    }

    /// Letter for factor vertex key `x` of factor f (nullopt for the root).
    std::optional<Letter> letter(int f, const VertexKey& x) const {
        auto it = factors_[f].index.find(x);
        if (it == factors_[f].index.end()) throw InvalidVertex("not a factor vertex: " + x.bytes());
        if (it->second == factors_[f].root) return std::nullopt;
        return Letter{f, it->second};
    }

    bool has_group_structure() const { return factors_[0].group && factors_[1].group; }

    /// Product of two words as elements of the free product of the factor
    /// groups (requires group structure on both factors).
    Word multiply(const Word& a, const Word& b) const {
        if (!has_group_structure()) throw UnsupportedParameter("factors carry no group structure");
        Word out = a;
        for (auto& x : b) {
            if (!out.empty() && out.back().factor == x.factor) {
                const auto& G = *factors_[x.factor].group;
                int p = G.mul(out.back().vertex, x.vertex);
                out.pop_back();
                if (p != G.identity()) out.push_back({x.factor, p});
            } else {
                out.push_back(x);
            }
        }
        return out;
    }

    Word inverse(const Word& a) const {
        if (!has_group_structure()) throw UnsupportedParameter("factors carry no group structure");
        Word out;
        for (auto it = a.rbegin(); it != a.rend(); ++it)
            out.push_back({it->factor, factors_[it->factor].group->inv(it->vertex)});
        return out;
    }

    /// Vertex map x -> g x, an automorphism when both factors are Cayley graphs.
    std::function<VertexKey(const VertexKey&)> left_multiplication(const Word& g) const {
        auto self = self_.lock();
        return [self, g](const VertexKey& v) { return self->key(self->multiply(g, self->word(v))); };
    }

    int factor_size(int f) const { return static_cast<int>(factors_[f].keys.size()); }
    int factor_root(int f) const { return factors_[f].root; }
    const std::vector<int>& factor_adjacency(int f, int v) const { return factors_[f].adj[v]; }

private:
    struct FactorData {
        std::string name;
        std::vector<VertexKey> keys;
        KeyMap<int> index;
        int root = 0;
        std::vector<std::vector<int>> adj;
        std::optional<FiniteGroup> group;
    };

    std::vector<VertexKey> neighbor_keys(const VertexKey& v) const {
        Word w = word(v);
        std::vector<VertexKey> out;
        std::optional<int> last = w.empty() ? std::nullopt : std::optional<int>(w.back().factor);
        // Moves inside the factor of the last letter: replace it.
        if (last) {
            const auto& fac = factors_[*last];
            Word base(w.begin(), w.end() - 1);
            for (int y : fac.adj[w.back().vertex]) {
                Word nw = base;
                if (y != fac.root) nw.push_back({*last, y});
                out.push_back(key(nw));
            }
        }
        // Moves out of the root of every other factor: extend the word.
        for (int f = 0; f < 2; ++f) {
            if (last && *last == f) continue;
            const auto& fac = factors_[f];
            for (int y : fac.adj[fac.root]) {
                Word nw = w;
                nw.push_back({f, y});
                out.push_back(key(nw));
            }
        }
        return out;
    }

    FactorData factors_[2];
    GraphOracle oracle_;
    std::weak_ptr<const FreeProductGraph> self_;
};

/// Shared handle to a free-product graph; the oracle and automorphisms
/// stay valid for as long as any copy lives.
class FreeProduct {
public:
    FreeProduct(const RootedGraph& g1, const RootedGraph& g2)
        : impl_(std::make_shared<FreeProductGraph>(g1, g2)) {}
    const FreeProductGraph& operator*() const { return *impl_; }
    const FreeProductGraph* operator->() const { return impl_.get(); }
    const GraphOracle& oracle() const { return impl_->oracle(); }

private:
    std::shared_ptr<FreeProductGraph> impl_;
};

inline FreeProduct build_free_product(const RootedGraph& g1, const RootedGraph& g2) { return FreeProduct(g1, g2); }

}  // namespace sawends
