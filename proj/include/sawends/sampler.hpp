#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "sawends/saw_engine.hpp"
#include "sawends/walk.hpp"

namespace sawends {

// Random streams. Sample i of a run with seed s draws from
// std::mt19937_64 seeded with splitmix64(s ^ splitmix64(i + 1)); bounded
// integers use rejection on the top of the 64-bit range. Because each
// sample owns its stream, results do not depend on how samples are
// distributed over workers.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

using SampleRng = std::mt19937_64;

inline SampleRng sample_stream(std::uint64_t seed, std::uint64_t index) {
    return SampleRng(splitmix64(seed ^ splitmix64(index + 1)));
}

/// Uniform integer in [0, bound), bound >= 1.
inline std::uint64_t uniform_below(SampleRng& rng, std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % bound;
}

struct DimerizeConfig {
    int base_length = 3;        // walks this short are drawn by step-slot rejection
    std::uint64_t budget = 1u << 22;  // total rejections allowed per sample
};

namespace detail {

/// Vertex ids handed out on first sight, adjacency fetched from the oracle
/// on first expansion. Only what the sampler touches is ever stored, so
/// exponentially growing graphs cost no more than lattices.
class LazyIndex {
public:
    explicit LazyIndex(const GraphOracle& g) : g_(g) {}

    int intern(const VertexKey& k) {
        auto [it, fresh] = id_.emplace(k, static_cast<int>(keys_.size()));
        if (fresh) {
            keys_.push_back(k);
            adj_.emplace_back();
            expanded_.push_back(0);
        }
        return it->second;
    }

    const std::vector<int>& adjacent(int x) {
        if (!expanded_[x]) {
            std::vector<int> nb;
            for (auto& y : g_.neighbors(keys_[x])) nb.push_back(intern(y));
            adj_[x] = std::move(nb);
            expanded_[x] = 1;
        }
        return adj_[x];
    }

    const VertexKey& key(int x) const { return keys_[x]; }
    std::size_t size() const { return keys_.size(); }

private:
    const GraphOracle& g_;
    KeyMap<int> id_;
    std::vector<VertexKey> keys_;
    std::vector<std::vector<int>> adj_;
    std::vector<char> expanded_;
};

class Dimerizer {
public:
    Dimerizer(LazyIndex& index, int degree_bound, SampleRng& rng, const DimerizeConfig& cfg)
        : index_(index), slots_(degree_bound), rng_(rng), cfg_(cfg) {}

    /// Uniform n-step SAW from `start` (ball ids), or nullopt on budget exhaustion.
    std::optional<std::vector<int>> draw(int start, int n) {
        while (true) {
            if (spent_ > cfg_.budget) return std::nullopt;
            auto w = n <= cfg_.base_length ? base(start, n) : split(start, n);
            if (!w) {
                if (spent_ > cfg_.budget) return std::nullopt;
                continue;
            }
            return w;
        }
    }

    std::uint64_t rejections() const { return spent_; }

private:
    // Every step picks one of degree_bound slots; slots beyond the actual
    // degree and steps onto visited vertices reject the whole attempt. Each
    // SAW is produced with probability degree_bound^{-n}.
    std::optional<std::vector<int>> base(int start, int n) {
        std::vector<int> w{start};
        ++stamp_;
        mark(start);
        for (int i = 0; i < n; ++i) {
            const auto& nb = index_.adjacent(w.back());
            auto k = uniform_below(rng_, static_cast<std::uint64_t>(slots_));
            if (k >= nb.size() || marked(nb[k])) {
                ++spent_;
                return std::nullopt;
            }
            w.push_back(nb[k]);
            mark(nb[k]);
        }
        return w;
    }

    // Concatenate independent uniform halves; retry both on intersection.
    std::optional<std::vector<int>> split(int start, int n) {
        int n1 = n / 2;
        auto first = draw(start, n1);
        if (!first) return std::nullopt;
        auto second = draw(first->back(), n - n1);
        if (!second) return std::nullopt;
        ++stamp_;
        for (int x : *first) mark(x);
        for (std::size_t i = 1; i < second->size(); ++i) {
            if (marked((*second)[i])) {
                ++spent_;
                return std::nullopt;
            }
        }
        first->insert(first->end(), second->begin() + 1, second->end());
        return first;
    }

    void mark(int x) {
        if (static_cast<std::size_t>(x) >= mark_.size()) mark_.resize(index_.size(), 0);
        mark_[x] = stamp_;
    }
    bool marked(int x) const { return static_cast<std::size_t>(x) < mark_.size() && mark_[x] == stamp_; }

    LazyIndex& index_;
    int slots_;
    SampleRng& rng_;
    const DimerizeConfig& cfg_;
    std::vector<std::uint32_t> mark_;
    std::uint32_t stamp_ = 0;
    std::uint64_t spent_ = 0;
};

}  // namespace detail

/// Uniform n-step SAW from v by recursive dimerization; exactly uniform on
/// vertex-transitive graphs (the second half's count does not depend on
/// where it starts). nullopt when the rejection budget runs out.
inline std::optional<Walk> dimerize(const GraphOracle& g, const VertexKey& v, int n, SampleRng& rng,
                                    const DimerizeConfig& cfg = {}) {
    if (n < 1) throw InvalidParameter("n must be at least 1");
    detail::LazyIndex index(g);
    detail::Dimerizer d(index, g.degree_bound(), rng, cfg);
    auto ids = d.draw(index.intern(v), n);
    if (!ids) return std::nullopt;
    Walk w;
    for (int x : *ids) w.vertices.push_back(index.key(x));
    return w;
}

struct SampleRun {
    int n = 0;
    int samples = 0;  // requested
    int accepted = 0;
    int failures = 0;
    std::uint64_t seed = 0;
    Rational alpha;
    int hits = 0;  // accepted samples with ||pi|| <= alpha n
    double estimate = 0;
    double mean_sq_estimate = 0;
    double ci_halfwidth = 0;  // 95% normal approximation
    std::optional<double> exact_fraction;
};

struct SpeedConfig {
    int workers = 1;
    int exact_limit = 0;  // cross-check against enumeration for n <= exact_limit
    DimerizeConfig dimerize;
};

/// Per n, estimates P_n(||pi|| <= alpha n) under the uniform measure on
/// n-step SAWs from v.
inline std::vector<SampleRun> estimate_speed(const GraphOracle& g, const VertexKey& v, const std::vector<int>& n_list,
                                             const Rational& alpha, int samples, std::uint64_t seed,
                                             const SpeedConfig& cfg = {}) {
    if (alpha <= 0 || alpha >= 1) throw InvalidParameter("alpha must lie in (0,1)");
    if (samples < 1) throw InvalidParameter("samples must be positive");
    if (cfg.workers < 1) throw InvalidParameter("workers must be at least 1");
    std::vector<SampleRun> out;
    for (int n : n_list) {
        if (n < 1) throw InvalidParameter("n must be at least 1");
        std::vector<int> dist(samples, -1);  // -1: failure
        std::atomic<int> next{0};
        auto work = [&] {
            detail::LazyIndex index(g);  // per worker; ids never influence the draw
            const int origin = index.intern(v);
            KeyMap<int> depth;
            for (int i; (i = next.fetch_add(1)) < samples;) {
                // stream index mixes n so different lengths use independent draws
                auto rng = sample_stream(seed, (static_cast<std::uint64_t>(n) << 40) + static_cast<std::uint64_t>(i));
                detail::Dimerizer d(index, g.degree_bound(), rng, cfg.dimerize);
                auto w = d.draw(origin, n);
                if (!w) continue;
                const VertexKey& end = index.key(w->back());
                auto it = depth.find(end);
                if (it == depth.end()) it = depth.emplace(end, *distance(g, v, end, n)).first;
                dist[i] = it->second;
            }
        };
        if (cfg.workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < cfg.workers; ++t) pool.emplace_back(work);
            for (auto& th : pool) th.join();
        }
        SampleRun r;
        r.n = n;
        r.samples = samples;
        r.seed = seed;
        r.alpha = alpha;
        double sq = 0;
        for (int d : dist) {
            if (d < 0) {
                ++r.failures;
                continue;
            }
            ++r.accepted;
            if (Rational(d) <= alpha * n) ++r.hits;
            sq += static_cast<double>(d) * d;
        }
        if (r.accepted) {
            r.estimate = static_cast<double>(r.hits) / r.accepted;
            r.mean_sq_estimate = sq / r.accepted;
            r.ci_halfwidth = 1.96 * std::sqrt(r.estimate * (1 - r.estimate) / r.accepted);
        }
        if (n <= cfg.exact_limit) {
            auto st = displacement_stats(g, v, n, {}, cfg.workers);
            r.exact_fraction = static_cast<double>(fraction_within(st, alpha));
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace sawends
