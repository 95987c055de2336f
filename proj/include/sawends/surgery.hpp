#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sawends/cutset.hpp"
#include "sawends/saw_engine.hpp"
#include "sawends/walk.hpp"

namespace sawends {

/// Connector: the walk avoids the copy; join its closest vertex pi(h) to
/// the copy by a shortest path omega, reflect omega and the suffix from h
/// through phi, and bridge omega's end to its image.
/// Crossing: the walk passes through the copy between its first and last
/// visits alpha, beta; keep the prefix up to alpha, route to phi(pi(beta))
/// outside A and phi A, and continue with the image of the suffix after beta.
enum class SurgeryVariant { Connector, Crossing };

inline const char* to_string(SurgeryVariant v) { return v == SurgeryVariant::Connector ? "connector" : "crossing"; }

struct SurgeryStep {
    Copy cut_copy;
    int split_index = 0;  // h (connector) or alpha (crossing)
    SurgeryVariant variant = SurgeryVariant::Connector;
    std::optional<Automorphism> automorphism;  // default: the cut set's swapper
    std::optional<std::vector<VertexKey>> connector;  // omega; default: shortest
};

struct SurgeryLimits {
    int search_cap = 16;  // bound on connector and bridge searches
    int side_cap = 64;    // how far a vertex may sit from the cut copy
};

struct SurgeryResult {
    Walk walk;
    int split_index = 0;
    int suffix_source = 0;  // first input index whose image is appended verbatim
    int suffix_start = 0;   // where that image sits in the output
    std::vector<VertexKey> connector;  // omega
    std::vector<VertexKey> bridge;     // beta (connector variant only)
    Automorphism automorphism;
    int length_increase = 0;
};

namespace detail {

/// Membership in the component of G minus T that contains `anchor`.
/// Each vertex is walked (avoiding T) to its nearest outer neighbour of T;
/// two outer neighbours share a component iff they are joined within the
/// cut set's connectivity radius. Cost is local to T, never a wide flood.
class SideTest {
public:
    SideTest(const GraphOracle& g, const Copy& t, const VertexKey& anchor, int connectivity_radius, int cap)
        : g_(g), removed_(t.vertices.begin(), t.vertices.end()), radius_(connectivity_radius), cap_(cap) {
        auto a = outer(anchor);
        if (!a) throw SurgeryConflict("anchor " + anchor.bytes() + " is not near the cut copy");
        anchor_ = *a;
    }

    bool operator()(const VertexKey& x) {
        if (removed_.count(x)) return false;
        auto it = cache_.find(x);
        if (it != cache_.end()) return it->second;
        auto y = outer(x);
        if (!y) throw SurgeryConflict("vertex " + x.bytes() + " farther than " + std::to_string(cap_) + " from the cut copy");
        bool in = joined_avoiding(g_, removed_, *y, anchor_, radius_);
        cache_.emplace(x, in);
        return in;
    }

private:
    std::optional<VertexKey> outer(const VertexKey& x) const {
        auto p = shortest_path(
            g_, x,
            [&](const VertexKey& z) {
                for (auto& w : g_.neighbors(z))
                    if (removed_.count(w)) return true;
                return false;
            },
            [&](const VertexKey& z) { return removed_.count(z) > 0; }, cap_);
        if (!p) return std::nullopt;
        return p->back();
    }

    const GraphOracle& g_;
    std::set<VertexKey> removed_;
    VertexKey anchor_;
    int radius_, cap_;
    KeyMap<bool> cache_;
};

inline void append_tail(std::vector<VertexKey>& out, const std::vector<VertexKey>& seg) {
    out.insert(out.end(), seg.begin() + 1, seg.end());
}

inline void require_saw(const GraphOracle& g, const Walk& w) {
    auto chk = verify_saw(g, w);
    if (!chk) throw SurgeryConflict("output " + chk.reason + " at index " + std::to_string(chk.index) +
                                    " (vertex " + w[chk.index].bytes() + ")");
}

}  // namespace detail

inline SurgeryResult single_surgery(const GraphOracle& g, const Walk& walk, const SurgeryStep& step, const CutSet& cs,
                                    const SurgeryLimits& lim = {}) {
    const int n = walk.steps();
    if (auto chk = verify_saw(g, walk); !chk) throw InvalidParameter("input is not a self-avoiding walk");
    if (step.split_index < 0 || step.split_index > n) throw InvalidParameter("split index outside the walk");
    const Copy& T = step.cut_copy;
    if (T.vertices.empty()) throw InvalidParameter("empty cut copy");
    std::set<VertexKey> Tset(T.vertices.begin(), T.vertices.end());
    auto resolve = [&](const VertexKey& anchor) -> Automorphism {
        if (step.automorphism) return *step.automorphism;
        if (!cs.swapper) throw InvalidAutomorphism("no automorphism given and the cut set has no swapper");
        return cs.swapper(T, anchor);
    };

    SurgeryResult res;
    res.split_index = step.split_index;
    std::vector<VertexKey> out(walk.vertices.begin(), walk.vertices.begin() + step.split_index + 1);

    if (step.variant == SurgeryVariant::Connector) {
        const int h = step.split_index;
        for (auto& v : walk.vertices)
            if (Tset.count(v)) throw InvalidParameter("connector surgery needs a copy the walk avoids");
        const VertexKey& ph = walk[h];
        std::vector<VertexKey> omega;
        if (step.connector) {
            omega = *step.connector;
            if (omega.empty() || omega.front() != ph || !Tset.count(omega.back()))
                throw InvalidParameter("connector must run from pi(h) to the cut copy");
            for (std::size_t i = 0; i + 1 < omega.size(); ++i)
                if (Tset.count(omega[i])) throw InvalidParameter("connector enters the copy early");
        } else {
            auto p = shortest_path(
                g, ph, [&](const VertexKey& x) { return Tset.count(x) > 0; }, {}, lim.search_cap);
            if (!p) throw SurgeryConflict("no connector to the cut copy within " + std::to_string(lim.search_cap));
            omega = std::move(*p);
        }
        Automorphism phi = resolve(ph);
        detail::SideTest in_A(g, T, ph, cs.connectivity_radius, lim.side_cap);
        if (in_A(phi(ph))) throw InvalidAutomorphism(phi.name + " leaves the suffix in its component");
        const VertexKey& s = omega.back();
        VertexKey target = phi(s);
        auto beta = shortest_path(
            g, s, [&](const VertexKey& x) { return x == target; },
            [&](const VertexKey& x) { return in_A(x) || in_A(phi.inverse(x)); }, lim.search_cap);
        if (!beta) throw SurgeryConflict("no bridge from " + s.bytes() + " to " + target.bytes());
        std::vector<VertexKey> theta;
        for (auto it = omega.rbegin(); it != omega.rend(); ++it) theta.push_back(phi(*it));
        for (int i = h + 1; i <= n; ++i) theta.push_back(phi(walk[i]));
        detail::append_tail(out, omega);
        detail::append_tail(out, *beta);
        int theta_at = static_cast<int>(out.size()) - 1;
        detail::append_tail(out, theta);
        res.connector = omega;
        res.bridge = *beta;
        res.automorphism = phi;
        res.suffix_source = h + 1;
        res.suffix_start = theta_at + static_cast<int>(omega.size());
    } else {
        const int a = step.split_index;
        if (!Tset.count(walk[a])) throw InvalidParameter("crossing surgery must split at a visit of the copy");
        int b = a;
        for (int i = 0; i <= n; ++i) {
            if (!Tset.count(walk[i])) continue;
            if (i < a) throw InvalidParameter("split index is not the first visit of the copy");
            b = i;
        }
        if (a < 1 || b > n - 1) throw InvalidParameter("copy visited at a walk end");
        Automorphism phi = resolve(walk[a - 1]);
        detail::SideTest in_A(g, T, walk[a - 1], cs.connectivity_radius, lim.side_cap);
        if (in_A(phi(walk[b + 1]))) throw InvalidAutomorphism(phi.name + " leaves the suffix in its component");
        VertexKey target = phi(walk[b]);
        std::set<VertexKey> prefix(walk.vertices.begin(), walk.vertices.begin() + a);
        auto omega = shortest_path(
            g, walk[a], [&](const VertexKey& x) { return x == target; },
            [&](const VertexKey& x) { return prefix.count(x) || in_A(x) || in_A(phi.inverse(x)); },
            lim.search_cap);
        if (!omega) throw SurgeryConflict("no route from " + walk[a].bytes() + " to " + target.bytes());
        detail::append_tail(out, *omega);
        res.suffix_start = static_cast<int>(out.size());
        for (int i = b + 1; i <= n; ++i) out.push_back(phi(walk[i]));
        res.connector = *omega;
        res.automorphism = phi;
        res.suffix_source = b + 1;
    }
    res.walk = Walk{std::move(out)};
    detail::require_saw(g, res.walk);
    res.length_increase = res.walk.steps() - n;
    return res;
}

struct SurgeryPlan {
    Walk base_walk;
    std::vector<SurgeryStep> steps;  // copies and split indices in the base walk's frame
    Rational delta{0};
};

struct IteratedResult {
    Walk walk;
    std::vector<SurgeryResult> steps;
    std::vector<Walk> intermediates;  // pi_1, pi_2, ...
    std::vector<Copy> used_copies;    // phi_k ... phi_1 S_{k+1} as actually cut
    bool images_disjoint = true;      // consecutive used copies pairwise disjoint
};

/// Runs the plan, carrying later copies and split indices through the
/// automorphisms applied so far.
inline IteratedResult iterated_surgery(const GraphOracle& g, const SurgeryPlan& plan, const CutSet& cs,
                                       const SurgeryLimits& lim = {}) {
    IteratedResult out;
    out.walk = plan.base_walk;
    std::vector<Automorphism> applied;
    // current index of each base-walk index i >= frontier; earlier ones are fixed
    std::vector<int> where(plan.base_walk.vertices.size());
    for (std::size_t i = 0; i < where.size(); ++i) where[i] = static_cast<int>(i);
    int last_split = -1;
    for (std::size_t k = 0; k < plan.steps.size(); ++k) {
        const auto& orig = plan.steps[k];
        if (orig.split_index <= last_split) throw InvalidParameter("split indices must increase");
        if (orig.split_index >= static_cast<int>(where.size()) || where[orig.split_index] < 0)
            throw InvalidParameter("step " + std::to_string(k) + " splits inside a replaced segment");
        SurgeryStep cur = orig;
        cur.split_index = where[orig.split_index];
        for (auto& v : cur.cut_copy.vertices)
            for (auto& phi : applied) v = phi(v);
        std::sort(cur.cut_copy.vertices.begin(), cur.cut_copy.vertices.end());
        cur.connector.reset();
        if (!out.used_copies.empty()) {
            for (auto& v : cur.cut_copy.vertices)
                if (out.used_copies.back().contains(v)) out.images_disjoint = false;
        }
        SurgeryResult r;
        try {
            r = single_surgery(g, out.walk, cur, cs, lim);
        } catch (const SurgeryConflict& e) {
            throw SurgeryConflict("step " + std::to_string(k) + ": " + e.what());
        }
        applied.push_back(r.automorphism);
        int shift = r.suffix_start - r.suffix_source;
        for (auto& w : where) {
            if (w < 0 || w <= cur.split_index) continue;
            w = w >= r.suffix_source ? w + shift : -1;
        }
        last_split = orig.split_index;
        out.used_copies.push_back(cur.cut_copy);
        out.walk = r.walk;
        out.intermediates.push_back(r.walk);
        out.steps.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// plan generation
// ---------------------------------------------------------------------------

/// Connector steps for every copy the walk avoids whose distance to the
/// walk is at most n0, each with its closest walk vertex (least index on
/// ties). Ordered by copy vertex set.
inline std::vector<SurgeryStep> connector_candidates(const GraphOracle& g, const Walk& walk, const CutSet& cs,
                                                     int n0) {
    KeyMap<int> on_walk;
    for (int i = 0; i <= walk.steps(); ++i) on_walk.emplace(walk[i], i);
    // multi-source BFS from the walk
    KeyMap<int> dist;
    std::vector<VertexKey> frontier;
    for (auto& v : walk.vertices) {
        dist.emplace(v, 0);
        frontier.push_back(v);
    }
    std::set<VertexKey> near;
    for (int d = 1; d <= n0; ++d) {
        std::vector<VertexKey> next;
        for (auto& x : frontier)
            for (auto& y : g.neighbors(x))
                if (dist.emplace(y, d).second) {
                    next.push_back(y);
                    near.insert(y);
                }
        frontier = std::move(next);
    }
    std::map<std::vector<VertexKey>, Copy> copies;
    for (auto& x : near)
        for (auto& c : cs.copies_containing(x)) {
            bool touched = std::any_of(c.vertices.begin(), c.vertices.end(),
                                       [&](const VertexKey& v) { return on_walk.count(v) > 0; });
            if (!touched) copies.emplace(c.vertices, c);
        }
    std::vector<SurgeryStep> out;
    for (auto& [key, c] : copies) {
        // closest walk vertex by BFS from the copy
        KeyMap<int> dc;
        std::vector<VertexKey> layer(c.vertices.begin(), c.vertices.end());
        for (auto& v : layer) dc.emplace(v, 0);
        int best = -1;
        for (int d = 0; d <= n0 && best < 0; ++d) {
            for (auto& x : layer) {
                auto it = on_walk.find(x);
                if (it != on_walk.end() && (best < 0 || it->second < best)) best = it->second;
            }
            if (best >= 0) break;
            std::vector<VertexKey> next;
            for (auto& x : layer)
                for (auto& y : g.neighbors(x))
                    if (dc.emplace(y, d + 1).second) next.push_back(y);
            layer = std::move(next);
        }
        if (best < 0) continue;
        out.push_back(SurgeryStep{c, best, SurgeryVariant::Connector, {}, {}});
    }
    return out;
}

/// Crossing steps at every copy the walk passes through with both its
/// entry and exit strictly inside the walk and on the same side, in order
/// of first visit.
inline std::vector<SurgeryStep> crossing_candidates(const GraphOracle& g, const Walk& walk, const CutSet& cs) {
    const int n = walk.steps();
    KeyMap<int> pos;
    for (int i = 0; i <= n; ++i) pos.emplace(walk[i], i);
    std::map<std::vector<VertexKey>, Copy> seen;
    std::vector<std::pair<int, Copy>> found;
    for (int j = 0; j <= n; ++j)
        for (auto& c : cs.copies_containing(walk[j])) {
            if (!seen.emplace(c.vertices, c).second) continue;
            int a = n + 1, b = -1;
            for (auto& v : c.vertices) {
                auto it = pos.find(v);
                if (it == pos.end()) continue;
                a = std::min(a, it->second);
                b = std::max(b, it->second);
            }
            if (a < 1 || b > n - 1) continue;
            std::set<VertexKey> removed(c.vertices.begin(), c.vertices.end());
            if (!detail::joined_avoiding(g, removed, walk[a - 1], walk[b + 1], cs.connectivity_radius)) continue;
            found.emplace_back(a, c);
        }
    std::stable_sort(found.begin(), found.end(), [](auto& x, auto& y) { return x.first < y.first; });
    std::vector<SurgeryStep> out;
    for (auto& [a, c] : found) out.push_back(SurgeryStep{c, a, SurgeryVariant::Crossing, {}, {}});
    return out;
}

}  // namespace sawends
