#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sawends/enumerate.hpp"
#include "sawends/graph_core.hpp"

namespace sawends {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Canonical decimal digits (BigInt's string constructor treats "0x.." and "0.." as hex/octal).
inline std::string detail_decimal(std::string s) {
    std::string sign = !s.empty() && s[0] == '-' ? "-" : "";
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.erase(0, 1);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw InvalidParameter("not a decimal integer: '" + s + "'");
    s.erase(0, std::min(s.find_first_not_of('0'), s.size() - 1));
    return sign + s;
}

/// Parses "p/q", "p" or a finite decimal such as "0.125" into an exact rational.
inline Rational parse_rational(const std::string& text) {
    auto bad = [&] { return InvalidParameter("not a rational number: '" + text + "'"); };
    if (text.empty()) throw bad();
    try {
        auto slash = text.find('/');
        if (slash != std::string::npos) {
            BigInt p(detail_decimal(text.substr(0, slash))), q(detail_decimal(text.substr(slash + 1)));
            if (q == 0) throw bad();
            return Rational(p, q);
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) return Rational(BigInt(detail_decimal(text)));
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        bool negative = !digits.empty() && digits[0] == '-';
        if (negative) digits.erase(0, 1);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) throw bad();
        // a leading zero would make the BigInt parser read octal
        digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
        BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(text.size() - dot - 1));
        Rational q(BigInt(digits), scale);
        return negative ? Rational(-q) : q;
    } catch (const InvalidParameter&) {
        throw;
    } catch (const std::exception&) {
        throw bad();
    }
}

inline std::string to_string(const Rational& q) {
    auto num = boost::multiprecision::numerator(q);
    auto den = boost::multiprecision::denominator(q);
    return den == 1 ? num.str() : num.str() + "/" + den.str();
}

/// c_n(v) for n = 0..entries.size()-1.
struct CountTable {
    VertexKey origin;
    std::vector<BigInt> entries;

    int n_max() const { return static_cast<int>(entries.size()) - 1; }
    const BigInt& operator[](int n) const { return entries.at(n); }
};

inline IndexedBall walk_ball(const GraphOracle& g, const VertexKey& v, int n_max) {
    if (n_max < 0) throw InvalidParameter("n_max must be nonnegative");
    return IndexedBall(g, v, n_max);  // InvalidVertex propagates from the oracle
}

inline CountTable count_walks_parallel(const GraphOracle& g, const VertexKey& v, int n_max, int workers) {
    auto b = walk_ball(g, v, n_max);
    auto res = enumerate_walks(b, n_max, LengthCounter(n_max), workers);
    CountTable t{v, {}};
    for (auto c : res.counts) t.entries.emplace_back(c);
    return t;
}

inline CountTable count_walks(const GraphOracle& g, const VertexKey& v, int n_max) {
    return count_walks_parallel(g, v, n_max, 1);
}

/// Entrywise maximum over orbit representatives: the sup-table c_n = sup_v c_n(v)
/// when the representatives cover a fundamental domain.
inline CountTable sup_table(const std::vector<CountTable>& tables) {
    if (tables.empty()) throw EmptyInput("no tables to combine");
    CountTable out = tables.front();
    for (auto& t : tables) {
        if (t.entries.size() != out.entries.size()) throw InvalidParameter("tables differ in length");
        for (std::size_t n = 0; n < t.entries.size(); ++n)
            if (t.entries[n] > out.entries[n]) {
                out.entries[n] = t.entries[n];
                out.origin = t.origin;
            }
    }
    return out;
}

struct SubmultiplicativityViolation {
    int m, n;
};

/// Pairs (m, n), 1 <= m <= n, m + n <= n_max, with c_{m+n} > c_m c_n.
inline std::vector<SubmultiplicativityViolation> submultiplicativity_violations(const CountTable& t) {
    std::vector<SubmultiplicativityViolation> out;
    for (int m = 1; m <= t.n_max(); ++m)
        for (int n = m; m + n <= t.n_max(); ++n)
            if (t[m + n] > t[m] * t[n]) out.push_back({m, n});
    return out;
}

/// n-th root of a big count, computed through logarithms to stay finite.
inline double nth_root(const BigInt& c, int n) {
    if (c <= 0) return 0.0;
    // log of a cpp_int without overflow: split off the top 53 bits.
    std::size_t bits = boost::multiprecision::msb(c) + 1;
    std::size_t shift = bits > 60 ? bits - 60 : 0;
    double mant = static_cast<double>(BigInt(c >> shift));
    return std::exp((std::log(mant) + static_cast<double>(shift) * std::log(2.0)) / n);
}

struct MuBounds {
    double upper = 0;  // min over n >= 1 of c_n^{1/n}
    int argmin = 0;
    std::vector<double> raw_roots;      // index n; raw_roots[0] unused (0)
    std::vector<double> running_min;    // index n
};

inline MuBounds mu_bounds(const CountTable& t) {
    if (t.n_max() < 1) throw EmptyInput("count table has no entries with n >= 1");
    MuBounds b;
    b.raw_roots.assign(t.entries.size(), 0.0);
    b.running_min.assign(t.entries.size(), 0.0);
    b.upper = INFINITY;
    for (int n = 1; n <= t.n_max(); ++n) {
        b.raw_roots[n] = nth_root(t[n], n);
        if (b.raw_roots[n] < b.upper) {
            b.upper = b.raw_roots[n];
            b.argmin = n;
        }
        b.running_min[n] = b.upper;
    }
    return b;
}

struct DisplacementStats {
    int n = 0;
    std::map<int, BigInt> histogram;        // ||pi|| -> count
    BigInt total;                           // = c_n(v)
    Rational mean_square;
    std::map<Rational, BigInt> tail_counts;  // a -> |{pi : ||pi|| >= a n}|
    std::optional<double> fitted_nu;        // estimate, only from a series
    std::pair<int, int> nu_window{0, 0};
};

namespace detail {

struct DisplacementVisitor {
    std::vector<std::vector<std::uint64_t>> hist;  // [n][distance]

    explicit DisplacementVisitor(int n_max = 0) : hist(n_max + 1, std::vector<std::uint64_t>(n_max + 1, 0)) {}
    void visit(const WalkState& s) { ++hist[s.steps()][s.ball->depth(s.path.back())]; }
    void merge(const DisplacementVisitor& o) {
        for (std::size_t n = 0; n < hist.size(); ++n)
            for (std::size_t d = 0; d < hist[n].size(); ++d) hist[n][d] += o.hist[n][d];
    }
};

inline void check_thresholds(const std::vector<Rational>& thresholds) {
    for (auto& a : thresholds)
        if (a <= 0 || a > 1) throw InvalidParameter("threshold " + to_string(a) + " outside (0,1]");
}

inline DisplacementStats stats_from_histogram(int n, const std::vector<std::uint64_t>& h,
                                              const std::vector<Rational>& thresholds) {
    DisplacementStats s;
    s.n = n;
    BigInt sq = 0;
    for (int d = 0; d < static_cast<int>(h.size()); ++d) {
        if (!h[d]) continue;
        s.histogram[d] = h[d];
        s.total += h[d];
        sq += BigInt(h[d]) * d * d;
    }
    s.mean_square = s.total == 0 ? Rational(0) : Rational(sq, s.total);
    for (auto& a : thresholds) {
        BigInt tail = 0;
        for (auto& [d, c] : s.histogram)
            if (Rational(d) >= a * n) tail += c;
        s.tail_counts[a] = tail;
    }
    return s;
}

}  // namespace detail

/// Least-squares slope of log<R^2>_n against 2 log n over [lo, hi].
inline std::optional<double> fit_nu(const std::vector<DisplacementStats>& series, int lo, int hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (auto& s : series) {
        if (s.n < lo || s.n > hi || s.n < 1 || s.mean_square <= 0) continue;
        double x = 2.0 * std::log(static_cast<double>(s.n));
        double y = std::log(static_cast<double>(s.mean_square));
        sx += x, sy += y, sxx += x * x, sxy += x * y;
        ++k;
    }
    if (k < 2) return std::nullopt;
    double den = k * sxx - sx * sx;
    if (den == 0) return std::nullopt;
    return (k * sxy - sx * sy) / den;
}

/// Stats for every n in 1..n_max from a single enumeration. fitted_nu is the
/// slope over [nu_lo, n_max] (default: the upper half of the range).
inline std::vector<DisplacementStats> displacement_series(const GraphOracle& g, const VertexKey& v, int n_max,
                                                          const std::vector<Rational>& thresholds,
                                                          int workers = 1, int nu_lo = -1) {
    if (n_max < 1) throw InvalidParameter("n must be at least 1");
    detail::check_thresholds(thresholds);
    auto b = walk_ball(g, v, n_max);
    auto res = enumerate_walks(b, n_max, detail::DisplacementVisitor(n_max), workers);
    std::vector<DisplacementStats> out;
    for (int n = 1; n <= n_max; ++n) out.push_back(detail::stats_from_histogram(n, res.hist[n], thresholds));
    if (nu_lo < 0) nu_lo = std::max(1, n_max / 2);
    auto nu = fit_nu(out, nu_lo, n_max);
    for (auto& s : out) {
        s.fitted_nu = nu;
        s.nu_window = {nu_lo, n_max};
    }
    return out;
}

inline DisplacementStats displacement_stats(const GraphOracle& g, const VertexKey& v, int n,
                                            const std::vector<Rational>& thresholds, int workers = 1) {
    if (n < 1) throw InvalidParameter("n must be at least 1");
    detail::check_thresholds(thresholds);
    auto b = walk_ball(g, v, n);
    auto res = enumerate_walks(b, n, detail::DisplacementVisitor(n), workers);
    return detail::stats_from_histogram(n, res.hist[n], thresholds);
}

/// Exact fraction of n-step walks with ||pi|| <= alpha n.
inline Rational fraction_within(const DisplacementStats& s, const Rational& alpha) {
    BigInt near = 0;
    for (auto& [d, c] : s.histogram)
        if (Rational(d) <= alpha * s.n) near += c;
    return s.total == 0 ? Rational(0) : Rational(near, s.total);
}

}  // namespace sawends
