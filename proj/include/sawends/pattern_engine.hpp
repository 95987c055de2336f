#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "sawends/cutset.hpp"
#include "sawends/enumerate.hpp"
#include "sawends/saw_engine.hpp"
#include "sawends/walk.hpp"

namespace sawends {

enum class EventTag { Estar, Ek, EkTilde, CalEk, CalEkTilde, F };

/// Which branch of the F definition applies: the one for growth of E*-free
/// walks below mu, or the level-k one for equality.
enum class FRegime { StarBelowMu, StarEqualsMu };

inline std::string to_string(EventTag t) {
    switch (t) {
        case EventTag::Estar: return "Estar";
        case EventTag::Ek: return "Ek";
        case EventTag::EkTilde: return "EkTilde";
        case EventTag::CalEk: return "CalEk";
        case EventTag::CalEkTilde: return "CalEkTilde";
        default: return "F";
    }
}

struct EventKind {
    EventTag tag = EventTag::Estar;
    int k = 0;
    std::optional<int> window_m;
    FRegime regime = FRegime::StarBelowMu;

    static EventKind estar(std::optional<int> m = {}) { return {EventTag::Estar, 0, m}; }
    static EventKind e(int k, std::optional<int> m = {}) { return {EventTag::Ek, k, m}; }
    static EventKind e_tilde(int k, std::optional<int> m = {}) { return {EventTag::EkTilde, k, m}; }
    static EventKind cal_e(int k, std::optional<int> m = {}) { return {EventTag::CalEk, k, m}; }
    static EventKind cal_e_tilde(int k, std::optional<int> m = {}) { return {EventTag::CalEkTilde, k, m}; }
    static EventKind f_below(int m) { return {EventTag::F, 0, m, FRegime::StarBelowMu}; }
    static EventKind f_equal(int k, int m) { return {EventTag::F, k, m, FRegime::StarEqualsMu}; }

    std::string label() const {
        std::string s = to_string(tag);
        if (tag != EventTag::Estar && (tag != EventTag::F || regime == FRegime::StarEqualsMu))
            s += "(k=" + std::to_string(k) + ")";
        if (window_m) s += "[m=" + std::to_string(*window_m) + "]";
        if (tag == EventTag::F) s += regime == FRegime::StarBelowMu ? "/star-below-mu" : "/star-equals-mu";
        return s;
    }
};

inline void check_kind(const CutSet& cs, const EventKind& kind) {
    const int s = static_cast<int>(cs.S.size());
    if (kind.window_m && *kind.window_m < 0) throw InvalidParameter("window m must be nonnegative");
    switch (kind.tag) {
        case EventTag::Estar: break;
        case EventTag::Ek:
        case EventTag::EkTilde:
            if (kind.k < 1 || kind.k > s) throw InvalidParameter("k must lie in [1, |S|]");
            break;
        case EventTag::CalEk:
        case EventTag::CalEkTilde:
            if (!cs.S_prime) throw InvalidParameter("enlarged-set events need S'");
            if (kind.k < 1 || kind.k > static_cast<int>(cs.S_prime->size()))
                throw InvalidParameter("k must lie in [1, |S'|]");
            break;
        case EventTag::F:
            if (!kind.window_m) throw InvalidParameter("F needs a window m");
            if (kind.regime == FRegime::StarEqualsMu && (kind.k < 1 || kind.k > s))
                throw InvalidParameter("k must lie in [1, |S|]");
            break;
    }
}

struct EventRecord {
    int step_j = 0;
    EventKind kind;
    Copy witness_copy;
    int visited_count = 0;
    std::optional<int> alpha, beta;
};

// ---------------------------------------------------------------------------
// reference detector (per walk, by keys)
// ---------------------------------------------------------------------------

namespace detail {

struct WalkIndex {
    KeyMap<int> position;
    explicit WalkIndex(const Walk& w) {
        for (int i = 0; i <= w.steps(); ++i) position.emplace(w[i], i);
    }
    int pos(const VertexKey& v) const {
        auto it = position.find(v);
        return it == position.end() ? -1 : it->second;
    }
    // visits of copy c at positions in [lo, hi]
    int visits(const Copy& c, int lo, int hi) const {
        int cnt = 0;
        for (auto& v : c.vertices) {
            int p = pos(v);
            cnt += p >= lo && p <= hi;
        }
        return cnt;
    }
};

}  // namespace detail

/// Window of step j for E(m): the 2m-window clipped at the walk's ends.
inline std::pair<int, int> event_window(int j, int n, std::optional<int> m) {
    if (!m) return {0, n};
    return {std::max(0, j - *m), std::min(n, j + *m)};
}

/// Whether pi(alpha-1) and pi(beta+1) lie in different components of G
/// minus the copy, decided by flood fill bounded by the connectivity radius.
inline bool crosses(const GraphOracle& g, const CutSet& cs, const Copy& c, const VertexKey& before,
                    const VertexKey& after) {
    std::set<VertexKey> removed(c.vertices.begin(), c.vertices.end());
    return !detail::joined_avoiding(g, removed, before, after, cs.connectivity_radius);
}

/// Every step of the walk at which the event occurs, one record per step
/// with the least (by vertex set) witness copy.
inline std::vector<EventRecord> detect_events(const GraphOracle& g, const Walk& walk, const CutSet& cs,
                                              const EventKind& kind) {
    check_kind(cs, kind);
    const int n = walk.steps();
    detail::WalkIndex idx(walk);
    const int s = static_cast<int>(cs.S.size());
    std::vector<EventRecord> out;

    for (int j = 0; j <= n; ++j) {
        auto [lo, hi] = event_window(j, n, kind.window_m);
        auto copies = cs.copies_containing(walk[j]);
        std::optional<EventRecord> rec;
        auto hit = [&](const Copy& c, int cnt) {
            if (!rec) rec = EventRecord{j, kind, c, cnt, {}, {}};
        };
        auto scan = [&](const std::vector<Copy>& cl, int need) {
            for (auto& c : cl) {
                int cnt = idx.visits(c, lo, hi);
                if (cnt >= need) hit(c, cnt);
            }
        };
        switch (kind.tag) {
            case EventTag::Estar:
                for (auto& c : copies) {
                    int cnt = idx.visits(c, lo, hi);
                    if (cnt == c.size()) hit(c, cnt);
                }
                break;
            case EventTag::Ek: scan(copies, kind.k); break;
            case EventTag::EkTilde: scan(copies, std::min(kind.k, s)); break;
            case EventTag::CalEk: scan(cs.copies_containing(walk[j], true), kind.k); break;
            case EventTag::CalEkTilde: {
                for (auto& c : copies) {
                    int cnt = idx.visits(c, lo, hi);
                    if (cnt == c.size()) hit(c, cnt);
                }
                if (!rec) scan(cs.copies_containing(walk[j], true), kind.k);
                break;
            }
            case EventTag::F: {
                const bool below = kind.regime == FRegime::StarBelowMu;
                if (!below) {
                    // E~_k(m) at j, and E~_{k+1} not at j.
                    bool ek_m = false, ek1 = false;
                    for (auto& c : copies) {
                        int w = idx.visits(c, lo, hi), all = idx.visits(c, 0, n);
                        if (w >= std::min(kind.k, s)) ek_m = true;
                        if (all >= std::min(kind.k + 1, s)) ek1 = true;
                    }
                    if (!ek_m || ek1) break;
                }
                for (auto& c : copies) {
                    int all = idx.visits(c, 0, n);
                    if (below ? idx.visits(c, lo, hi) != c.size() : all != kind.k) continue;
                    int a = n + 1, b = -1;
                    for (auto& v : c.vertices) {
                        int p = idx.pos(v);
                        if (p < 0) continue;
                        a = std::min(a, p);
                        b = std::max(b, p);
                    }
                    if (a < lo || b > hi) continue;
                    if (a == b && c.size() > 1) continue;
                    if (a < 1 || b > n - 1) continue;
                    if (!crosses(g, cs, c, walk[a - 1], walk[b + 1])) continue;
                    rec = EventRecord{j, kind, c, all, a, b};
                    break;
                }
                break;
            }
        }
        if (rec) out.push_back(std::move(*rec));
    }
    return out;
}

// ---------------------------------------------------------------------------
// counting
// ---------------------------------------------------------------------------

/// Translates of S and S' met by walks inside a ball, flattened to ids.
class CopyIndex {
public:
    struct Entry {
        std::vector<int> ids;  // ball ids, -1 outside the ball
        int size = 0;
        std::vector<int> outer;        // ball ids adjacent to the copy
        std::vector<int> outer_class;  // component class of each outer vertex
    };

    CopyIndex(const IndexedBall& ball, const CutSet& cs, int reach, bool with_enlarged, bool with_components)
        : per_vertex_(ball.size()), per_vertex_enlarged_(ball.size()) {
        std::map<std::vector<VertexKey>, int> seen, seen_enlarged;
        for (int x = 0; x < ball.size(); ++x) {
            if (ball.depth(x) > reach) continue;
            for (auto& c : cs.copies_containing(ball.key(x)))
                per_vertex_[x].push_back(intern(ball, c, seen, copies_));
            if (with_enlarged)
                for (auto& c : cs.copies_containing(ball.key(x), true))
                    per_vertex_enlarged_[x].push_back(intern(ball, c, seen_enlarged, enlarged_));
        }
        if (with_components) {
            std::vector<int> mark(ball.size(), -1);
            for (int ci = 0; ci < static_cast<int>(copies_.size()); ++ci) classify(ball, cs, ci, mark);
        }
    }

    const std::vector<int>& copies_at(int x) const { return per_vertex_[x]; }
    const std::vector<int>& enlarged_at(int x) const { return per_vertex_enlarged_[x]; }
    const Entry& copy(int c) const { return copies_[c]; }
    const Entry& enlarged(int c) const { return enlarged_[c]; }

    /// Component class of outer vertex x of copy c, or -1 when x is not outer.
    int side(int c, int x) const {
        auto& e = copies_[c];
        auto it = std::lower_bound(e.outer.begin(), e.outer.end(), x);
        if (it == e.outer.end() || *it != x) return -1;
        return e.outer_class[it - e.outer.begin()];
    }

private:
    static int intern(const IndexedBall& ball, const Copy& c, std::map<std::vector<VertexKey>, int>& seen,
                      std::vector<Entry>& store) {
        auto [it, fresh] = seen.emplace(c.vertices, static_cast<int>(store.size()));
        if (fresh) {
            Entry e;
            e.size = c.size();
            for (auto& v : c.vertices) e.ids.push_back(ball.id(v));
            store.push_back(std::move(e));
        }
        return it->second;
    }

    void classify(const IndexedBall& ball, const CutSet& cs, int ci, std::vector<int>& mark) {
        auto& e = copies_[ci];
        for (int v : e.ids) {
            if (v < 0) continue;
            mark[v] = -2;
        }
        for (int v : e.ids) {
            if (v < 0) continue;
            auto [lo, hi] = ball.adjacent(v);
            for (auto p = lo; p != hi; ++p)
                if (mark[*p] != -2) e.outer.push_back(*p);
        }
        std::sort(e.outer.begin(), e.outer.end());
        e.outer.erase(std::unique(e.outer.begin(), e.outer.end()), e.outer.end());
        e.outer_class.assign(e.outer.size(), -1);
        int classes = 0;
        for (std::size_t i = 0; i < e.outer.size(); ++i) {
            if (e.outer_class[i] >= 0) continue;
            e.outer_class[i] = classes;
            // bounded BFS avoiding the copy
            std::vector<int> queue{e.outer[i]}, dist{0};
            std::vector<int> touched{e.outer[i]};
            mark[e.outer[i]] = 0;
            for (std::size_t h = 0; h < queue.size(); ++h) {
                int x = queue[h];
                if (mark[x] >= cs.connectivity_radius) continue;
                auto [lo, hi] = ball.adjacent(x);
                for (auto p = lo; p != hi; ++p) {
                    if (mark[*p] != -1) continue;
                    mark[*p] = mark[x] + 1;
                    queue.push_back(*p);
                    touched.push_back(*p);
                }
            }
            for (std::size_t k = i + 1; k < e.outer.size(); ++k)
                if (e.outer_class[k] < 0 && mark[e.outer[k]] >= 0) e.outer_class[k] = classes;
            for (int x : touched) mark[x] = -1;
            ++classes;
        }
        for (int v : e.ids)
            if (v >= 0) mark[v] = -1;
    }

    std::vector<std::vector<int>> per_vertex_, per_vertex_enlarged_;
    std::vector<Entry> copies_, enlarged_;
};

namespace detail {

inline int visits(const CopyIndex::Entry& e, std::span<const int> position, int lo, int hi) {
    int cnt = 0;
    for (int x : e.ids) {
        if (x < 0) continue;
        int p = position[x];
        cnt += p >= lo && p <= hi;
    }
    return cnt;
}

/// Evaluates events on a walk of ball ids with positions. Mirrors
/// detect_events exactly; kept separate because it runs inside the
/// enumeration hot loop.
struct FastEvents {
    const CopyIndex* index;
    int s;  // |S|

    bool occurs(const WalkState& w, int j, const EventKind& kind) const {
        const int n = w.steps();
        auto [lo, hi] = event_window(j, n, kind.window_m);
        const int x = w.path[j];
        auto full_here = [&] {
            for (int c : index->copies_at(x)) {
                auto& e = index->copy(c);
                if (visits(e, w.position, lo, hi) == e.size) return true;
            }
            return false;
        };
        auto at_least = [&](int need, bool enlarged) {
            for (int c : enlarged ? index->enlarged_at(x) : index->copies_at(x)) {
                auto& e = enlarged ? index->enlarged(c) : index->copy(c);
                if (visits(e, w.position, lo, hi) >= need) return true;
            }
            return false;
        };
        switch (kind.tag) {
            case EventTag::Estar: return full_here();
            case EventTag::Ek: return at_least(kind.k, false);
            case EventTag::EkTilde: return at_least(std::min(kind.k, s), false);
            case EventTag::CalEk: return at_least(kind.k, true);
            case EventTag::CalEkTilde: return full_here() || at_least(kind.k, true);
            case EventTag::F: return f_occurs(w, j, kind, lo, hi);
        }
        return false;
    }

    bool f_occurs(const WalkState& w, int j, const EventKind& kind, int lo, int hi) const {
        const int n = w.steps();
        const int x = w.path[j];
        const bool below = kind.regime == FRegime::StarBelowMu;
        if (!below) {
            bool ek_m = false, ek1 = false;
            for (int c : index->copies_at(x)) {
                auto& e = index->copy(c);
                if (visits(e, w.position, lo, hi) >= std::min(kind.k, s)) ek_m = true;
                if (visits(e, w.position, 0, n) >= std::min(kind.k + 1, s)) ek1 = true;
            }
            if (!ek_m || ek1) return false;
        }
        for (int c : index->copies_at(x)) {
            auto& e = index->copy(c);
            int all = visits(e, w.position, 0, n);
            if (below ? visits(e, w.position, lo, hi) != e.size : all != kind.k) continue;
            int a = n + 1, b = -1;
            for (int v : e.ids) {
                if (v < 0 || w.position[v] < 0) continue;
                a = std::min(a, w.position[v]);
                b = std::max(b, w.position[v]);
            }
            if (a < lo || b > hi) continue;
            if (a == b && e.size > 1) continue;
            if (a < 1 || b > n - 1) continue;
            int sa = index->side(c, w.path[a - 1]), sb = index->side(c, w.path[b + 1]);
            if (sa != sb) return true;
        }
        return false;
    }

    int count(const WalkState& w, const EventKind& kind) const {
        int q = 0;
        for (int j = 0; j <= w.steps(); ++j) q += occurs(w, j, kind);
        return q;
    }

    /// E_k somewhere on the whole walk.
    bool e_anywhere(const WalkState& w, int k) const {
        const int n = w.steps();
        for (int j = 0; j <= n; ++j)
            for (int c : index->copies_at(w.path[j]))
                if (visits(index->copy(c), w.position, 0, n) >= k) return true;
        return false;
    }
};

struct OccurrenceHistogram {
    const FastEvents* ev = nullptr;
    EventKind kind;
    std::vector<std::vector<std::uint64_t>> hist;  // [n][occurrences]

    OccurrenceHistogram() = default;
    OccurrenceHistogram(const FastEvents* e, EventKind k, int n_max)
        : ev(e), kind(k), hist(n_max + 1, std::vector<std::uint64_t>(n_max + 2, 0)) {}
    void visit(const WalkState& w) { ++hist[w.steps()][ev->count(w, kind)]; }
    void merge(const OccurrenceHistogram& o) {
        for (std::size_t n = 0; n < hist.size(); ++n)
            for (std::size_t q = 0; q < hist[n].size(); ++q) hist[n][q] += o.hist[n][q];
    }
};

struct QuotaHistogram {
    const FastEvents* ev = nullptr;
    EventKind quota_kind, f_kind;
    int forbid_k = 0;  // walks with E_{forbid_k} anywhere are dropped (0: none)
    std::vector<std::vector<std::vector<std::uint64_t>>> hist;  // [n][quota][F]

    QuotaHistogram() = default;
    QuotaHistogram(const FastEvents* e, EventKind q, EventKind f, int forbid, int n_max)
        : ev(e), quota_kind(q), f_kind(f), forbid_k(forbid),
          hist(n_max + 1, std::vector<std::vector<std::uint64_t>>(n_max + 2, std::vector<std::uint64_t>(n_max + 2, 0))) {}
    void visit(const WalkState& w) {
        if (forbid_k && ev->e_anywhere(w, forbid_k)) return;
        ++hist[w.steps()][ev->count(w, quota_kind)][ev->count(w, f_kind)];
    }
    void merge(const QuotaHistogram& o) {
        for (std::size_t n = 0; n < hist.size(); ++n)
            for (std::size_t q = 0; q < hist[n].size(); ++q)
                for (std::size_t f = 0; f < hist[n][q].size(); ++f) hist[n][q][f] += o.hist[n][q][f];
    }
};

/// Ball radius that keeps every copy met by a walk, and the flood fills
/// around it, inside the materialized region.
inline int pattern_radius(const CutSet& cs, int n_max) {
    int extent = 0;
    for (auto* base : {&cs.S, cs.S_prime ? &*cs.S_prime : nullptr}) {
        if (!base) continue;
        extent = std::max(extent, static_cast<int>(base->size()));
    }
    return n_max + std::max(extent, cs.connectivity_radius) + 1;
}

}  // namespace detail

struct GrowthEstimate {
    std::string label;
    VertexKey origin;
    int r = 0;
    CountTable restricted_table;         // c_n(r, E) or b_n(r, F), n = 0..n_max
    std::vector<double> lambda_roots;    // n-th roots, index n
    std::pair<int, int> window{1, 0};
    std::vector<std::vector<BigInt>> occurrence_histogram;  // [n][q] (restricted counts only)
};

namespace detail {

inline void fill_roots(GrowthEstimate& g) {
    g.lambda_roots.assign(g.restricted_table.entries.size(), 0.0);
    for (int n = 1; n <= g.restricted_table.n_max(); ++n) g.lambda_roots[n] = nth_root(g.restricted_table[n], n);
    g.window = {1, g.restricted_table.n_max()};
}

}  // namespace detail

/// Exact occurrence histograms: hist[n][q] = number of n-step SAWs from v
/// on which the event occurs at exactly q steps.
inline std::vector<std::vector<BigInt>> occurrence_histogram(const GraphOracle& g, const VertexKey& v, int n_max,
                                                             const CutSet& cs, const EventKind& kind,
                                                             int workers = 1) {
    check_kind(cs, kind);
    if (n_max < 0) throw InvalidParameter("n_max must be nonnegative");
    IndexedBall ball(g, v, detail::pattern_radius(cs, n_max));
    bool enlarged = kind.tag == EventTag::CalEk || kind.tag == EventTag::CalEkTilde;
    CopyIndex index(ball, cs, n_max, enlarged, kind.tag == EventTag::F);
    detail::FastEvents ev{&index, static_cast<int>(cs.S.size())};
    auto res = enumerate_walks(ball, n_max, detail::OccurrenceHistogram(&ev, kind, n_max), workers);
    std::vector<std::vector<BigInt>> out(n_max + 1);
    for (int n = 0; n <= n_max; ++n)
        for (auto c : res.hist[n]) out[n].emplace_back(c);
    return out;
}

/// c_n(r, E) (or c_n(r, E(m)) with a window) for n = 0..n_max.
inline GrowthEstimate count_restricted(const GraphOracle& g, const VertexKey& v, int n_max, const CutSet& cs,
                                       const EventKind& kind, int r, int workers = 1) {
    if (r < 0) throw InvalidParameter("r must be nonnegative");
    if (kind.tag == EventTag::F) throw InvalidParameter("use count_b for F");
    GrowthEstimate est;
    est.label = "c_n(" + std::to_string(r) + "," + kind.label() + ")";
    est.origin = v;
    est.r = r;
    est.occurrence_histogram = occurrence_histogram(g, v, n_max, cs, kind, workers);
    est.restricted_table.origin = v;
    for (auto& row : est.occurrence_histogram) {
        BigInt sum = 0;
        for (int q = 0; q <= r && q < static_cast<int>(row.size()); ++q) sum += row[q];
        est.restricted_table.entries.push_back(sum);
    }
    detail::fill_roots(est);
    return est;
}

/// Entrywise max over representatives (sup over a fundamental domain).
inline GrowthEstimate count_restricted_sup(const GraphOracle& g, const std::vector<VertexKey>& reps, int n_max,
                                           const CutSet& cs, const EventKind& kind, int r, int workers = 1) {
    if (reps.empty()) throw EmptyInput("no representatives");
    std::optional<GrowthEstimate> best;
    std::vector<CountTable> tables;
    for (auto& v : reps) {
        auto e = count_restricted(g, v, n_max, cs, kind, r, workers);
        tables.push_back(e.restricted_table);
        if (!best) best = std::move(e);
    }
    best->restricted_table = sup_table(tables);
    best->origin = best->restricted_table.origin;
    best->occurrence_histogram.clear();
    detail::fill_roots(*best);
    return *best;
}

struct BParams {
    FRegime regime = FRegime::StarBelowMu;
    Rational a{1, 4};
    int m = 1;
    int k = 1;  // level, equality branch only
};

/// Full quota/F histogram behind b_n(r, F): hist[n][q][f] counts n-step
/// SAWs whose quota event occurs at q steps and F at f steps. In the
/// equality branch walks on which E_{k+1} occurs are excluded.
struct BHistogram {
    BParams params;
    std::vector<std::vector<std::vector<BigInt>>> hist;

    BigInt b(int n, int r) const {
        BigInt sum = 0;
        for (int q = 0; q < static_cast<int>(hist[n].size()); ++q) {
            if (Rational(q) < params.a * n) continue;
            for (int f = 0; f <= r && f < static_cast<int>(hist[n][q].size()); ++f) sum += hist[n][q][f];
        }
        return sum;
    }
};

inline BHistogram b_histogram(const GraphOracle& g, const VertexKey& v, int n_max, const CutSet& cs,
                              const BParams& p, int workers = 1) {
    if (p.a <= 0 || p.a > 1) throw InvalidParameter("a must lie in (0,1]");
    if (p.m < 0) throw InvalidParameter("m must be nonnegative");
    const bool below = p.regime == FRegime::StarBelowMu;
    EventKind quota = below ? EventKind::estar(p.m) : EventKind::e_tilde(p.k, p.m);
    EventKind f = below ? EventKind::f_below(p.m) : EventKind::f_equal(p.k, p.m);
    check_kind(cs, quota);
    check_kind(cs, f);
    const int s = static_cast<int>(cs.S.size());
    int forbid = below ? 0 : (p.k + 1 <= s ? p.k + 1 : 0);
    IndexedBall ball(g, v, detail::pattern_radius(cs, n_max));
    CopyIndex index(ball, cs, n_max, false, true);
    detail::FastEvents ev{&index, s};
    auto res = enumerate_walks(ball, n_max, detail::QuotaHistogram(&ev, quota, f, forbid, n_max), workers);
    BHistogram out{p, {}};
    out.hist.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        out.hist[n].resize(res.hist[n].size());
        for (std::size_t q = 0; q < res.hist[n].size(); ++q)
            for (auto c : res.hist[n][q]) out.hist[n][q].emplace_back(c);
    }
    return out;
}

inline GrowthEstimate count_b(const GraphOracle& g, const VertexKey& v, int n_max, const CutSet& cs,
                              const BParams& p, int r, int workers = 1) {
    if (r < 0) throw InvalidParameter("r must be nonnegative");
    auto h = b_histogram(g, v, n_max, cs, p, workers);
    GrowthEstimate est;
    est.label = "b_n(" + std::to_string(r) + ",F)/" +
                (p.regime == FRegime::StarBelowMu ? std::string("star-below-mu")
                                                  : "star-equals-mu(k=" + std::to_string(p.k) + ")") +
                "/a=" + to_string(p.a) + "/m=" + std::to_string(p.m);
    est.origin = v;
    est.r = r;
    est.restricted_table.origin = v;
    for (int n = 0; n <= n_max; ++n) est.restricted_table.entries.push_back(h.b(n, r));
    detail::fill_roots(est);
    return est;
}

/// Finite-n suggestion for the level k of the equality branch: the
/// largest k whose E~_k-free root at n_max sits at least `margin` below the
/// unrestricted root while the k+1 root does not. Purely advisory.
inline std::optional<int> suggest_level(const std::vector<GrowthEstimate>& e_tilde_by_k, const CountTable& all,
                                        double margin = 0.05) {
    int n = all.n_max();
    if (n < 1) return std::nullopt;
    double mu_n = nth_root(all[n], n);
    std::optional<int> best;
    for (std::size_t i = 0; i + 1 < e_tilde_by_k.size(); ++i) {
        double here = e_tilde_by_k[i].lambda_roots.at(n), next = e_tilde_by_k[i + 1].lambda_roots.at(n);
        if (here <= (1 - margin) * mu_n && next > (1 - margin) * mu_n) best = static_cast<int>(i) + 1;
    }
    return best;
}

/// Number of pairwise disjoint copies that witness F on the walk (greedy
/// over records in step order). Each such copy is crossed, so the walk's
/// displacement is at least this number.
inline int disjoint_f_witnesses(const std::vector<EventRecord>& records) {
    std::vector<const Copy*> chosen;
    for (auto& r : records) {
        bool clash = false;
        for (auto* c : chosen) {
            for (auto& v : r.witness_copy.vertices)
                if (c->contains(v)) clash = true;
        }
        if (!clash) chosen.push_back(&r.witness_copy);
    }
    return static_cast<int>(chosen.size());
}

}  // namespace sawends
