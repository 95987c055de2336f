#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sawends/graph_builders.hpp"
#include "sawends/graph_core.hpp"
#include "sawends/group_presentations.hpp"

namespace sawends {

/// A graph automorphism as a pair of mutually inverse vertex maps.
struct Automorphism {
    std::string name;
    std::function<VertexKey(const VertexKey&)> forward;
    std::function<VertexKey(const VertexKey&)> inverse;

    VertexKey operator()(const VertexKey& x) const { return forward(x); }
};

inline Automorphism identity_automorphism() {
    auto id = [](const VertexKey& x) { return x; };
    return {"identity", id, id};
}

/// Translation group acting on the graph. Translations are named by
/// strings; `solve(s, v)` lists every translation gamma with gamma(s) = v
/// (a finite list: the action is free, or close to it).
struct GroupAction {
    std::string name;
    std::function<std::vector<std::string>(const VertexKey& from, const VertexKey& to)> solve;
    std::function<VertexKey(const std::string& gamma, const VertexKey& x)> apply;
};

/// One translate gamma S (or gamma S'); vertices sorted.
struct Copy {
    std::string translation;
    std::vector<VertexKey> vertices;

    bool contains(const VertexKey& v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }
    int size() const { return static_cast<int>(vertices.size()); }
    friend bool operator==(const Copy& a, const Copy& b) { return a.vertices == b.vertices; }
};

struct CutSet {
    std::string name;
    std::vector<VertexKey> S;
    std::optional<std::vector<VertexKey>> S_prime;
    GroupAction action;
    /// Two outer neighbours of a copy that lie in the same component of G
    /// minus the copy are joined there by a path of at most this length.
    int connectivity_radius = 0;
    /// phi(T, A): automorphism moving the component of G minus copy T that
    /// contains `inside` to a different component. Optional.
    std::function<Automorphism(const Copy& copy, const VertexKey& inside)> swapper;

    const std::vector<VertexKey>& base(bool enlarged) const {
        if (!enlarged) return S;
        if (!S_prime) throw InvalidParameter("cut set has no enlarged set S'");
        return *S_prime;
    }

    Copy translate(const std::string& gamma, bool enlarged = false) const {
        Copy c{gamma, {}};
        for (auto& s : base(enlarged)) c.vertices.push_back(action.apply(gamma, s));
        std::sort(c.vertices.begin(), c.vertices.end());
        return c;
    }

    Copy base_copy(bool enlarged = false) const {
        Copy c{"identity", base(enlarged)};
        std::sort(c.vertices.begin(), c.vertices.end());
        return c;
    }

    /// All distinct translates of S (or S') containing v, ordered by vertex set.
    std::vector<Copy> copies_containing(const VertexKey& v, bool enlarged = false) const {
        std::map<std::vector<VertexKey>, Copy> found;
        for (auto& s : base(enlarged)) {
            for (auto& gamma : action.solve(s, v)) {
                Copy c = translate(gamma, enlarged);
                found.emplace(c.vertices, std::move(c));
            }
        }
        std::vector<Copy> out;
        for (auto& [k, c] : found) out.push_back(std::move(c));
        return out;
    }
};

namespace detail {

/// Bounded flood fill in G minus `removed`: is y reachable from x within cap steps?
inline bool joined_avoiding(const GraphOracle& g, const std::set<VertexKey>& removed, const VertexKey& x,
                            const VertexKey& y, int cap) {
    if (removed.count(x) || removed.count(y)) return false;
    auto p = shortest_path(
        g, x, [&](const VertexKey& z) { return z == y; },
        [&](const VertexKey& z) { return removed.count(z) > 0; }, cap);
    return p.has_value();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// presets
// ---------------------------------------------------------------------------

/// Cylinder Z x Z_w with S = {0} x Z_w, S' = {-1,0,1} x Z_w, acted on by
/// horizontal shifts that are multiples of `stride`. The swapper reflects
/// through the copy's column, which exchanges its two sides and fixes it.
inline CutSet cylinder_cutset(int width, int stride = 1) {
    if (width < 3) throw UnsupportedParameter("cylinder width must be at least 3");
    if (stride < 1) throw InvalidParameter("shift stride must be positive");
    CutSet cs;
    cs.name = "cylinder-column/w" + std::to_string(width) + "/stride" + std::to_string(stride);
    std::vector<VertexKey> enlarged;
    for (int y = 0; y < width; ++y) {
        cs.S.push_back(lattice_key(0, y));
        for (int x = -1; x <= 1; ++x) enlarged.push_back(lattice_key(x, y));
    }
    cs.S_prime = enlarged;
    cs.action.name = "x-shift*" + std::to_string(stride);
    cs.action.solve = [stride](const VertexKey& from, const VertexKey& to) -> std::vector<std::string> {
        auto [x1, y1] = parse_lattice_key(from);
        auto [x2, y2] = parse_lattice_key(to);
        long dx = x2 - x1;
        if (y1 != y2 || dx % stride != 0) return {};
        return {std::to_string(dx)};
    };
    cs.action.apply = [](const std::string& gamma, const VertexKey& v) {
        auto [x, y] = parse_lattice_key(v);
        return lattice_key(x + std::stol(gamma), y);
    };
    cs.connectivity_radius = width / 2;
    cs.swapper = [](const Copy& copy, const VertexKey&) {
        long c = parse_lattice_key(copy.vertices.front()).first;
        auto reflect = [c](const VertexKey& v) {
            auto [x, y] = parse_lattice_key(v);
            return lattice_key(2 * c - x, y);
        };
        return Automorphism{"reflect@" + std::to_string(c), reflect, reflect};
    };
    return cs;
}

/// S = S' = {o} in a free product of finite Cayley graphs, acted on by left
/// multiplication. The swapper for copy {g} and a component entered
/// through factor f is left multiplication by g u g^{-1}, u the least
/// root-neighbour of the other factor.
inline CutSet free_product_root_cutset(const FreeProduct& fp) {
    if (!fp->has_group_structure()) throw UnsupportedParameter("free product factors carry no group structure");
    CutSet cs;
    cs.name = "free-product-root";
    cs.S = {FreeProductGraph::root()};
    cs.S_prime = cs.S;
    cs.action.name = "left-multiplication";
    cs.action.solve = [fp](const VertexKey& from, const VertexKey& to) -> std::vector<std::string> {
        auto gamma = fp->multiply(fp->word(to), fp->inverse(fp->word(from)));
        return {fp->key(gamma).bytes()};
    };
    cs.action.apply = [fp](const std::string& gamma, const VertexKey& v) {
        return fp->key(fp->multiply(fp->word(VertexKey(gamma)), fp->word(v)));
    };
    cs.connectivity_radius = fp->factor_size(0) + fp->factor_size(1);
    cs.swapper = [fp](const Copy& copy, const VertexKey& inside) {
        auto g = fp->word(copy.vertices.front());
        auto rel = fp->multiply(fp->inverse(g), fp->word(inside));
        if (rel.empty()) throw InvalidParameter("anchor vertex lies in the cut copy");
        int other = 1 - rel.front().factor;
        int root = fp->factor_root(other);
        auto& nb = fp->factor_adjacency(other, root);
        int u = *std::min_element(nb.begin(), nb.end());
        FreeProductGraph::Word uw{{other, u}};
        auto conj = fp->multiply(fp->multiply(g, uw), fp->inverse(g));
        auto conj_inv = fp->inverse(conj);
        return Automorphism{"left*" + fp->key(conj).bytes(), fp->left_multiplication(conj),
                            fp->left_multiplication(conj_inv)};
    };
    return cs;
}

/// Cut set in a Cayley graph acted on by left multiplication; no swapper.
template <class Group>
CutSet cayley_cutset(const CayleyGraph<Group>& cg, std::vector<VertexKey> S,
                     std::optional<std::vector<VertexKey>> S_prime, int connectivity_radius,
                     std::string name = "cayley-cut") {
    CutSet cs;
    cs.name = std::move(name);
    cs.S = std::move(S);
    cs.S_prime = std::move(S_prime);
    cs.connectivity_radius = connectivity_radius;
    cs.action.name = "left-multiplication";
    cs.action.solve = [cg](const VertexKey& from, const VertexKey& to) -> std::vector<std::string> {
        auto& G = cg.group();
        return {G.multiply(G.decode(to), G.inverse(G.decode(from))).key().bytes()};
    };
    cs.action.apply = [cg](const std::string& gamma, const VertexKey& v) {
        auto& G = cg.group();
        return G.multiply(G.decode(VertexKey(gamma)), G.decode(v)).key();
    };
    return cs;
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

enum class CheckStatus { Pass, Fail, Inconclusive };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        default: return "inconclusive";
    }
}

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Inconclusive;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    int boundary_components = 0;
    std::optional<int> measured_connectivity_radius;
    std::optional<int> measured_N;  // bridge bound of the swapping automorphisms

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckResult& c) { return c.status == CheckStatus::Pass; });
    }
    const CheckResult& check(const std::string& name) const {
        for (auto& c : checks)
            if (c.name == name) return c;
        throw InvalidParameter("no check named " + name);
    }
};

namespace detail {

// Exhaustive search for an SAW inside `inside` from u to v visiting all of `cover`.
inline bool covering_saw(const GraphOracle& g, const std::set<VertexKey>& inside, const std::set<VertexKey>& cover,
                         const VertexKey& u, const VertexKey& v) {
    std::set<VertexKey> on_path{u};
    std::function<bool(const VertexKey&, int)> dfs = [&](const VertexKey& x, int covered) -> bool {
        if (x == v) return covered == static_cast<int>(cover.size());
        for (auto& y : g.neighbors(x)) {
            if (!inside.count(y) || on_path.count(y)) continue;
            on_path.insert(y);
            bool ok = dfs(y, covered + (cover.count(y) ? 1 : 0));
            on_path.erase(y);
            if (ok) return true;
        }
        return false;
    };
    return dfs(u, cover.count(u) ? 1 : 0);
}

}  // namespace detail

/// Finite-radius checks of the cut-set hypotheses around the base copy S:
///  connected       S induces a connected subgraph
///  two_components  at least two components of ball minus S reach the shell
///  covering_saws   (S' only) distinct u, v on the boundary of S' are joined
///                  inside S' by an SAW visiting all of S
///  action          sampled translations preserve adjacency
///  connectivity    same-side outer neighbours of S are joined within
///                  connectivity_radius
///  swap            (swapper only) each phi(S, A) moves A off itself and
///                  every v on the A-side of S is bridged to phi(v) in
///                  G minus (A u phi A); the longest bridge is N
inline ValidationReport validate_cutset(const GraphOracle& g, const CutSet& cs, int radius) {
    if (cs.S.empty()) throw InvalidParameter("cut set S is empty");
    ValidationReport rep;
    const VertexKey& center = cs.S.front();
    std::set<VertexKey> S(cs.S.begin(), cs.S.end());
    for (auto& s : S) g.neighbors(s);

    {  // connected
        std::set<VertexKey> seen{center};
        std::vector<VertexKey> stack{center};
        while (!stack.empty()) {
            auto x = stack.back();
            stack.pop_back();
            for (auto& y : g.neighbors(x))
                if (S.count(y) && seen.insert(y).second) stack.push_back(y);
        }
        bool ok = seen.size() == S.size();
        rep.checks.push_back({"connected", ok ? CheckStatus::Pass : CheckStatus::Fail,
                              std::to_string(seen.size()) + " of " + std::to_string(S.size()) + " reached"});
    }

    auto comps = components_after_removal(g, S, center, radius);
    rep.boundary_components = comps.boundary_touching();
    rep.checks.push_back({"two_components", rep.boundary_components >= 2 ? CheckStatus::Pass : CheckStatus::Fail,
                          std::to_string(rep.boundary_components) + " boundary-touching component(s) at radius " +
                              std::to_string(radius)});

    if (cs.S_prime) {
        std::set<VertexKey> Sp(cs.S_prime->begin(), cs.S_prime->end());
        bool superset = std::includes(Sp.begin(), Sp.end(), S.begin(), S.end());
        std::vector<VertexKey> boundary;
        for (auto& x : Sp) {
            auto nb = g.neighbors(x);
            if (std::any_of(nb.begin(), nb.end(), [&](const VertexKey& y) { return !Sp.count(y); }))
                boundary.push_back(x);
        }
        int pairs = 0, failed = 0;
        std::string first_failure;
        for (std::size_t i = 0; superset && i < boundary.size(); ++i)
            for (std::size_t j = i + 1; j < boundary.size(); ++j) {
                ++pairs;
                if (!detail::covering_saw(g, Sp, S, boundary[i], boundary[j])) {
                    if (!failed++) first_failure = boundary[i].bytes() + " -- " + boundary[j].bytes();
                }
            }
        CheckResult c{"covering_saws", CheckStatus::Pass, std::to_string(pairs) + " boundary pair(s) checked"};
        if (!superset) c = {"covering_saws", CheckStatus::Fail, "S is not contained in S'"};
        else if (failed) c = {"covering_saws", CheckStatus::Fail, std::to_string(failed) + " pair(s) fail, e.g. " + first_failure};
        rep.checks.push_back(c);
    }

    {  // action: translations carrying S to vertices near the center preserve adjacency
        auto near = bfs_depths(g, center, 2);
        std::vector<VertexKey> targets;
        for (auto& [k, d] : near) targets.push_back(k);
        std::sort(targets.begin(), targets.end());
        int tested = 0;
        std::string bad;
        for (auto& t : targets) {
            for (auto& gamma : cs.action.solve(center, t)) {
                for (auto& [x, d] : near) {
                    std::vector<VertexKey> img;
                    for (auto& y : g.neighbors(x)) img.push_back(cs.action.apply(gamma, y));
                    std::sort(img.begin(), img.end());
                    if (img != g.neighbors(cs.action.apply(gamma, x)) && bad.empty())
                        bad = "translation " + gamma + " breaks adjacency at " + x.bytes();
                }
                ++tested;
            }
        }
        rep.checks.push_back({"action", bad.empty() ? (tested ? CheckStatus::Pass : CheckStatus::Inconclusive)
                                                    : CheckStatus::Fail,
                              bad.empty() ? std::to_string(tested) + " translation(s) checked" : bad});
    }

    {  // connectivity radius
        IndexedBall b(g, center, radius);
        std::vector<char> blocked(b.size(), 0);
        for (auto& s : S) {
            int id = b.id(s);
            if (id < 0) throw RadiusTooSmall("validation radius does not cover S");
            blocked[id] = 1;
        }
        std::vector<int> outer;
        for (auto& s : S) {
            auto [lo, hi] = b.adjacent(b.id(s));
            for (auto p = lo; p != hi; ++p)
                if (!blocked[*p]) outer.push_back(*p);
        }
        std::sort(outer.begin(), outer.end());
        outer.erase(std::unique(outer.begin(), outer.end()), outer.end());
        int worst = 0;
        bool unreachable = false;
        for (int x : outer) {
            auto d = b.distances_from(x, radius, blocked);
            for (int y : outer) {
                if (comps.component_of.at(b.key(x)) != comps.component_of.at(b.key(y))) continue;
                if (d[y] < 0) unreachable = true;
                else worst = std::max(worst, d[y]);
            }
        }
        rep.measured_connectivity_radius = worst;
        CheckStatus st = unreachable ? CheckStatus::Inconclusive
                                     : (worst <= cs.connectivity_radius ? CheckStatus::Pass : CheckStatus::Fail);
        rep.checks.push_back({"connectivity", st,
                              "measured " + std::to_string(worst) + ", declared " +
                                  std::to_string(cs.connectivity_radius)});
    }

    if (cs.swapper) {
        Copy base = cs.base_copy();
        int N = 0;
        std::string bad;
        int cap = radius;
        for (int cid = 0; cid < static_cast<int>(comps.components.size()); ++cid) {
            auto& comp = comps.components[cid];
            if (!comp.touches_boundary) continue;
            const VertexKey& anchor = comp.representative;
            Automorphism phi = cs.swapper(base, anchor);
            auto in_A = [&](const VertexKey& x) {
                auto it = comps.component_of.find(x);
                if (it != comps.component_of.end()) return it->second == cid;
                return !S.count(x) && detail::joined_avoiding(g, S, x, anchor, 2 * radius);
            };
            // phi A must leave A: compare a vertex and its image.
            VertexKey img = phi(anchor);
            if (in_A(img)) {
                if (bad.empty()) bad = phi.name + " keeps component of " + anchor.bytes();
                continue;
            }
            for (auto& v : S) {
                auto nb = g.neighbors(v);
                if (std::none_of(nb.begin(), nb.end(), [&](const VertexKey& y) { return in_A(y); })) continue;
                VertexKey target = phi(v);
                auto path = shortest_path(
                    g, v, [&](const VertexKey& z) { return z == target; },
                    [&](const VertexKey& z) { return in_A(z) || in_A(phi.inverse(z)); }, cap);
                if (!path) {
                    if (bad.empty()) bad = "no bridge from " + v.bytes() + " to " + target.bytes();
                    continue;
                }
                N = std::max(N, static_cast<int>(path->size()) - 1);
            }
        }
        if (bad.empty()) rep.measured_N = N;
        rep.checks.push_back({"swap", bad.empty() ? CheckStatus::Pass : CheckStatus::Fail,
                              bad.empty() ? "bridge bound N = " + std::to_string(N) : bad});
    }
    return rep;
}

}  // namespace sawends
