#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "sawends/graph_core.hpp"

namespace sawends {

/// State of the depth-first walk enumerator at one node of the search tree.
/// `path` holds ball ids of the current walk; `position[x]` is the index of
/// x on the path or -1.
struct WalkState {
    const IndexedBall* ball;
    std::span<const int> path;
    std::span<const int> position;

    int steps() const { return static_cast<int>(path.size()) - 1; }
};

namespace detail {

template <class Visitor>
void extend(const IndexedBall& ball, std::vector<int>& path, std::vector<int>& position, int n_max,
            Visitor& visitor) {
    visitor.visit(WalkState{&ball, path, position});
    if (static_cast<int>(path.size()) - 1 == n_max) return;
    auto [lo, hi] = ball.adjacent(path.back());
    for (auto p = lo; p != hi; ++p) {
        if (position[*p] >= 0) continue;
        position[*p] = static_cast<int>(path.size());
        path.push_back(*p);
        extend(ball, path, position, n_max, visitor);
        path.pop_back();
        position[*p] = -1;
    }
}

}  // namespace detail

/// Visits every self-avoiding walk of length 0..n_max from the ball center
/// exactly once. The search tree is split at a fixed prefix depth into
/// subtrees handed to `workers` threads, each with a private copy of
/// `prototype`; the copies are folded back with Visitor::merge. Visitors
/// accumulate by exact addition, so the result does not depend on the
/// worker count or scheduling.
///
/// The ball must have radius >= n_max.
template <class Visitor>
Visitor enumerate_walks(const IndexedBall& ball, int n_max, const Visitor& prototype, int workers = 1) {
    if (workers < 1) throw InvalidParameter("workers must be at least 1");
    if (ball.radius() < n_max) throw RadiusTooSmall("ball radius below walk length");
    const int n = ball.size();

    // Prefix depth: the shallowest level with enough subtrees to balance.
    const std::size_t want = workers == 1 ? 1 : static_cast<std::size_t>(workers) * 16;
    std::vector<std::vector<int>> frontier{{0}};
    int split = 0;
    Visitor shallow = prototype;  // nodes above the split level
    while (frontier.size() < want && split < n_max) {
        std::vector<std::vector<int>> next;
        std::vector<int> position(n, -1);
        for (auto& prefix : frontier) {
            for (std::size_t i = 0; i < prefix.size(); ++i) position[prefix[i]] = static_cast<int>(i);
            shallow.visit(WalkState{&ball, prefix, position});
            auto [lo, hi] = ball.adjacent(prefix.back());
            for (auto p = lo; p != hi; ++p) {
                if (position[*p] >= 0) continue;
                auto ext = prefix;
                ext.push_back(*p);
                next.push_back(std::move(ext));
            }
            for (int x : prefix) position[x] = -1;
        }
        frontier = std::move(next);
        ++split;
    }

    const int threads = std::min<int>(workers, static_cast<int>(std::max<std::size_t>(frontier.size(), 1)));
    std::vector<Visitor> partial(threads, prototype);
    std::atomic<std::size_t> next_task{0};
    auto run = [&](int t) {
        std::vector<int> position(n, -1);
        std::vector<int> path;
        path.reserve(n_max + 1);
        for (std::size_t task; (task = next_task.fetch_add(1)) < frontier.size();) {
            path = frontier[task];
            for (std::size_t i = 0; i < path.size(); ++i) position[path[i]] = static_cast<int>(i);
            detail::extend(ball, path, position, n_max, partial[t]);
            for (int x : path) position[x] = -1;
        }
    };
    if (threads == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(run, t);
        for (auto& th : pool) th.join();
    }
    for (auto& p : partial) shallow.merge(p);
    return shallow;
}

/// Per-length walk counter; the simplest visitor.
struct LengthCounter {
    std::vector<std::uint64_t> counts;

    explicit LengthCounter(int n_max = 0) : counts(n_max + 1, 0) {}
    void visit(const WalkState& s) { ++counts[s.steps()]; }
    void merge(const LengthCounter& o) {
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    }
};

}  // namespace sawends
