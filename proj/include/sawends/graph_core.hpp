#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sawends/errors.hpp"

namespace sawends {

/// Canonical byte-string name of a vertex. Builders guarantee that two keys
/// are equal iff they denote the same vertex; ordering is bytewise.
class VertexKey {
public:
    VertexKey() = default;
    explicit VertexKey(std::string bytes) : bytes_(std::move(bytes)) {}

    const std::string& bytes() const noexcept { return bytes_; }

    friend bool operator==(const VertexKey&, const VertexKey&) = default;
    friend std::strong_ordering operator<=>(const VertexKey& a, const VertexKey& b) {
        int c = a.bytes_.compare(b.bytes_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    std::string bytes_;
};

struct VertexKeyHash {
    std::size_t operator()(const VertexKey& k) const noexcept {
        return std::hash<std::string>{}(k.bytes());
    }
};

using KeySet = std::unordered_set<VertexKey, VertexKeyHash>;
template <class V>
using KeyMap = std::unordered_map<VertexKey, V, VertexKeyHash>;

enum class Transitivity { unknown, vertex_transitive, quasi_transitive };

/// Adjacency oracle over canonically keyed vertices. Immutable after
/// construction and cheap to copy; safe to share between threads.
class GraphOracle {
public:
    using NeighborFn = std::function<std::vector<VertexKey>(const VertexKey&)>;

    GraphOracle() = default;
    GraphOracle(std::string name, NeighborFn fn, int degree_bound,
                Transitivity transitivity = Transitivity::unknown, int domain_size = 1)
        : impl_(std::make_shared<Impl>(
              Impl{std::move(name), std::move(fn), degree_bound, transitivity, domain_size})) {}

    /// Sorted, duplicate-free adjacency list. Throws InvalidVertex for
    /// malformed keys.
    std::vector<VertexKey> neighbors(const VertexKey& v) const {
        auto out = impl_->fn(v);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    int degree_bound() const noexcept { return impl_->degree_bound; }
    Transitivity transitivity() const noexcept { return impl_->transitivity; }
    int domain_size() const noexcept { return impl_->domain_size; }
    const std::string& name() const noexcept { return impl_->name; }
    bool valid() const noexcept { return impl_ != nullptr; }

private:
    struct Impl {
        std::string name;
        NeighborFn fn;
        int degree_bound;
        Transitivity transitivity;
        int domain_size;
    };
    std::shared_ptr<const Impl> impl_;
};

inline std::vector<VertexKey> neighbors(const GraphOracle& g, const VertexKey& v) {
    return g.neighbors(v);
}

/// BFS distance, or nullopt when it exceeds `cap`.
inline std::optional<int> distance(const GraphOracle& g, const VertexKey& u, const VertexKey& v,
                                   int cap) {
    if (cap < 0) throw InvalidParameter("distance cap must be nonnegative");
    g.neighbors(u);
    g.neighbors(v);
    if (u == v) return 0;
    KeyMap<int> dist{{u, 0}};
    std::deque<VertexKey> queue{u};
    while (!queue.empty()) {
        VertexKey x = std::move(queue.front());
        queue.pop_front();
        int d = dist[x];
        if (d >= cap) continue;
        for (auto& y : g.neighbors(x)) {
            if (dist.count(y)) continue;
            if (y == v) return d + 1;
            dist.emplace(y, d + 1);
            queue.push_back(y);
        }
    }
    return std::nullopt;
}

/// Explicit finite view of the graph: vertices sorted by key, edges as
/// index pairs (i < j), lexicographically sorted.
struct ExplicitGraph {
    std::vector<VertexKey> vertices;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> depth;  // distance from the ball center, parallel to vertices

    int index_of(const VertexKey& k) const {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), k);
        if (it == vertices.end() || *it != k) return -1;
        return static_cast<int>(it - vertices.begin());
    }
};

inline KeyMap<int> bfs_depths(const GraphOracle& g, const VertexKey& v, int r) {
    KeyMap<int> dist{{v, 0}};
    std::deque<VertexKey> queue{v};
    while (!queue.empty()) {
        VertexKey x = std::move(queue.front());
        queue.pop_front();
        int d = dist[x];
        if (d >= r) continue;
        for (auto& y : g.neighbors(x)) {
            if (dist.emplace(y, d + 1).second) queue.push_back(y);
        }
    }
    return dist;
}

/// Induced subgraph on all vertices within distance r of v.
inline ExplicitGraph ball(const GraphOracle& g, const VertexKey& v, int r) {
    if (r < 0) throw InvalidParameter("ball radius must be nonnegative");
    g.neighbors(v);
    auto dist = bfs_depths(g, v, r);
    ExplicitGraph out;
    out.vertices.reserve(dist.size());
    for (auto& [k, d] : dist) out.vertices.push_back(k);
    std::sort(out.vertices.begin(), out.vertices.end());
    out.depth.reserve(out.vertices.size());
    for (auto& k : out.vertices) out.depth.push_back(dist[k]);
    for (int i = 0; i < static_cast<int>(out.vertices.size()); ++i) {
        for (auto& y : g.neighbors(out.vertices[i])) {
            int j = out.index_of(y);
            if (j > i) out.edges.emplace_back(i, j);
        }
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

/// Ball materialized with dense integer ids and CSR adjacency, the working
/// representation of every enumeration. Id 0 is the center; ids follow BFS
/// discovery order with sorted neighbor lists, so the layout is
/// deterministic. Adjacency of vertices at the outer shell only lists
/// neighbors inside the ball.
class IndexedBall {
public:
    IndexedBall(const GraphOracle& g, const VertexKey& center, int radius) : radius_(radius) {
        if (radius < 0) throw InvalidParameter("ball radius must be nonnegative");
        g.neighbors(center);
        add(center, 0);
        std::vector<std::vector<VertexKey>> raw;
        for (std::size_t head = 0; head < keys_.size(); ++head) {
            auto nb = g.neighbors(keys_[head]);
            if (depth_[head] < radius) {
                for (auto& y : nb) {
                    if (!ids_.count(y)) add(y, depth_[head] + 1);
                }
            }
            raw.push_back(std::move(nb));
        }
        offsets_.assign(keys_.size() + 1, 0);
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            for (auto& y : raw[i]) {
                auto it = ids_.find(y);
                if (it != ids_.end()) adjacency_.push_back(it->second);
            }
            offsets_[i + 1] = static_cast<int>(adjacency_.size());
        }
    }

    int size() const noexcept { return static_cast<int>(keys_.size()); }
    int radius() const noexcept { return radius_; }
    const VertexKey& key(int id) const { return keys_[id]; }
    int depth(int id) const { return depth_[id]; }
    int id(const VertexKey& k) const {
        auto it = ids_.find(k);
        return it == ids_.end() ? -1 : it->second;
    }
    std::pair<const int*, const int*> adjacent(int id) const {
        return {adjacency_.data() + offsets_[id], adjacency_.data() + offsets_[id + 1]};
    }

    /// BFS distances (capped at `cap`, -1 beyond) from `source` inside the ball,
    /// skipping vertices flagged in `blocked` (may be empty).
    std::vector<int> distances_from(int source, int cap,
                                    const std::vector<char>& blocked = {}) const {
        std::vector<int> d(keys_.size(), -1);
        std::vector<int> queue{source};
        d[source] = 0;
        for (std::size_t h = 0; h < queue.size(); ++h) {
            int x = queue[h];
            if (d[x] >= cap) continue;
            auto [b, e] = adjacent(x);
            for (auto p = b; p != e; ++p) {
                if (d[*p] >= 0 || (!blocked.empty() && blocked[*p])) continue;
                d[*p] = d[x] + 1;
                queue.push_back(*p);
            }
        }
        return d;
    }

private:
    void add(const VertexKey& k, int d) {
        ids_.emplace(k, static_cast<int>(keys_.size()));
        keys_.push_back(k);
        depth_.push_back(d);
    }

    int radius_;
    std::vector<VertexKey> keys_;
    std::vector<int> depth_;
    KeyMap<int> ids_;
    std::vector<int> offsets_;
    std::vector<int> adjacency_;
};

struct Component {
    VertexKey representative;  // least key in the component
    int size = 0;              // number of its vertices inside the ball
    bool touches_boundary = false;
};

/// Components of ball(center, radius) minus a removed set. A component that
/// reaches the outer shell is a candidate infinite component; one that does
/// not is certainly finite.
struct ComponentReport {
    std::set<VertexKey> removed;
    int radius = 0;
    std::vector<Component> components;
    KeyMap<int> component_of;

    int boundary_touching() const {
        return static_cast<int>(std::count_if(components.begin(), components.end(),
                                              [](const Component& c) { return c.touches_boundary; }));
    }
};

inline ComponentReport components_after_removal(const GraphOracle& g, const std::set<VertexKey>& S,
                                                const VertexKey& center, int radius) {
    IndexedBall b(g, center, radius);
    for (auto& s : S) {
        if (b.id(s) < 0) throw RadiusTooSmall("removed vertex " + s.bytes() + " lies outside the ball");
    }
    ComponentReport rep;
    rep.removed = S;
    rep.radius = radius;
    std::vector<int> label(b.size(), -1);
    for (auto& s : S) label[b.id(s)] = -2;
    // Seed components in key order so component ids are reproducible.
    std::vector<int> order(b.size());
    for (int i = 0; i < b.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return b.key(x) < b.key(y); });
    for (int seed : order) {
        if (label[seed] != -1) continue;
        int cid = static_cast<int>(rep.components.size());
        Component comp{b.key(seed), 0, false};
        std::vector<int> stack{seed};
        label[seed] = cid;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            ++comp.size;
            if (b.depth(x) == radius) comp.touches_boundary = true;
            rep.component_of.emplace(b.key(x), cid);
            auto [lo, hi] = b.adjacent(x);
            for (auto p = lo; p != hi; ++p) {
                if (label[*p] == -1) {
                    label[*p] = cid;
                    stack.push_back(*p);
                }
            }
        }
        rep.components.push_back(std::move(comp));
    }
    return rep;
}

/// Shortest path from `from` to the nearest vertex satisfying `is_target`,
/// never entering vertices where `blocked` holds (the start is exempt).
/// Among equal-length paths the result is the lexicographically least
/// sequence of keys read from the target backwards, with the least-keyed
/// nearest target.
inline std::optional<std::vector<VertexKey>> shortest_path(
    const GraphOracle& g, const VertexKey& from,
    const std::function<bool(const VertexKey&)>& is_target,
    const std::function<bool(const VertexKey&)>& blocked, int cap) {
    if (is_target(from)) return std::vector<VertexKey>{from};
    std::vector<std::vector<VertexKey>> layers{{from}};
    KeyMap<int> dist{{from, 0}};
    std::vector<VertexKey> hits;
    while (hits.empty() && static_cast<int>(layers.size()) <= cap) {
        std::vector<VertexKey> next;
        int d = static_cast<int>(layers.size());
        for (auto& x : layers.back()) {
            for (auto& y : g.neighbors(x)) {
                if (dist.count(y) || (blocked && blocked(y))) continue;
                dist.emplace(y, d);
                next.push_back(y);
                if (is_target(y)) hits.push_back(y);
            }
        }
        if (next.empty()) break;
        layers.push_back(std::move(next));
    }
    if (hits.empty()) return std::nullopt;
    VertexKey cur = *std::min_element(hits.begin(), hits.end());
    std::vector<VertexKey> path{cur};
    for (int d = dist[cur] - 1; d >= 0; --d) {
        std::optional<VertexKey> best;
        for (auto& y : g.neighbors(cur)) {
            auto it = dist.find(y);
            if (it != dist.end() && it->second == d && (!best || y < *best)) best = y;
        }
        cur = *best;
        path.push_back(cur);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace sawends
