// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Every tolerance, seed and sample size is fixed below.

#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace sawends;

namespace {

// --- pinned parameters -------------------------------------------------------
constexpr int kExactN = 8;                     // AC1
constexpr int kHexN = 18;                      // AC2
constexpr int kSpeedLo = 8, kSpeedHi = 18;     // AC4 exact window
constexpr double kSpeedRatio = 0.05;           // AC4 f(18) < ratio * f(8)
constexpr int kSpeedSamples = 20000;           // AC4 Monte Carlo
constexpr std::uint64_t kSpeedSeed = 20261015;
constexpr int kTailN = 16;                     // AC5
constexpr double kTailTolerance = 0.02;
constexpr int kPatternN = 14;                  // AC6
constexpr double kPatternGap = 0.05;
constexpr int kSurgeries = 1000;               // AC7, per graph
constexpr int kSurgeryN0 = 3;
constexpr int kWords = 10000;                  // AC8
constexpr int kPairs = 50;                     // AC9
constexpr int kSeparationRadius = 12;
constexpr int kChiN = 8, kChiSamples = 100000;  // AC10
constexpr double kChiLevel = 0.01;
constexpr int kCalibrationMaxN = 16, kCalibrationSamples = 20000;
constexpr std::uint64_t kCalibrationSeed = 20261015;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "first failure: " << what << "; ";
            pass = false;
        }
    }
};

struct Named {
    std::string name;
    GraphOracle g;
    VertexKey v;
};

std::vector<Named> exact_zoo() {
    auto am = fixtures::amalgam_graph(fixtures::z4_z2_z6());
    return {{"square", build_square_lattice(), lattice_key(0, 0)},
            {"hexagonal", build_hexagonal_lattice(), lattice_key(0, 0)},
            {"cylinder3", build_cylinder(3), lattice_key(0, 0)},
            {"cylinder4", build_cylinder(4), lattice_key(0, 0)},
            {"K2*K2", fixtures::k2_k2().oracle(), FreeProductGraph::root()},
            {"C3*C3", fixtures::c3_c3().oracle(), FreeProductGraph::root()},
            {"Z4*Z2Z6", am.oracle(), am.group().identity().key()}};
}

double to_double(const Rational& q) { return static_cast<double>(q); }

// ----------------------------------------------------------------------------

void ac1(Outcome& o) {
    for (auto& z : exact_zoo()) {
        auto naive = oracle::naive_counts(z.g, z.v, kExactN);
        auto fast = count_walks_parallel(z.g, z.v, kExactN, 2);
        for (int n = 0; n <= kExactN; ++n) o.require(fast[n] == naive[n], z.name + " n=" + std::to_string(n));
        o.detail << z.name << " c8=" << fast[kExactN] << " ";
    }
}

void ac2(Outcome& o) {
    const double mu_hex = std::sqrt(2 + std::sqrt(2.0));
    auto t = count_walks(build_hexagonal_lattice(), lattice_key(0, 0), kHexN);
    auto b = mu_bounds(t);
    o.require(b.upper >= mu_hex, "min root below sqrt(2+sqrt2)");
    for (int n = 7; n <= kHexN; ++n)
        o.require(b.running_min[n] < b.running_min[n - 1], "running minimum not strictly decreasing at n=" + std::to_string(n));
    o.detail << std::setprecision(8) << "min root " << b.upper << " at n=" << b.argmin << " (bound " << mu_hex
             << "), c18=" << t[kHexN];
}

void ac3(Outcome& o) {
    auto hn = fixtures::hnn_graph(fixtures::hnn_z4());
    auto cases = exact_zoo();
    cases.push_back({"HNN(Z4,Z2,id)", hn.oracle(), hn.group().identity().key()});
    std::map<std::string, int> depth{{"square", 14}, {"hexagonal", 18}, {"cylinder3", 16}, {"cylinder4", 15},
                                     {"K2*K2", 30},  {"C3*C3", 13},     {"Z4*Z2Z6", 9},    {"HNN(Z4,Z2,id)", 10}};
    std::size_t pairs = 0;
    // every graph here is vertex-transitive (lattices, cylinders, Cayley graphs)
    for (auto& z : cases) {
        auto t = count_walks_parallel(z.g, z.v, depth.at(z.name), 1);
        auto v = submultiplicativity_violations(t);
        o.require(v.empty(), z.name + " has " + std::to_string(v.size()) + " violations");
        pairs += static_cast<std::size_t>(t.n_max()) * t.n_max() / 2;
    }
    o.detail << "graphs=" << cases.size() << " pairs~" << pairs << " violations=0" << (o.pass ? "" : " (see above)");
}

void ac4(Outcome& o) {
    auto g = build_cylinder(4);
    auto series = displacement_series(g, lattice_key(0, 0), kSpeedHi, {}, 1);
    const Rational alpha(1, 8);
    auto f = [&](int n) { return fraction_within(series[n - 1], alpha); };
    for (int n = kSpeedLo + 1; n <= kSpeedHi; ++n)
        o.require(f(n) <= f(n - 1), "fraction increases at n=" + std::to_string(n) + " (" +
                                        std::to_string(to_double(f(n - 1))) + " -> " + std::to_string(to_double(f(n))) + ")");
    o.require(f(kSpeedHi) < kSpeedRatio * f(kSpeedLo), "f(18) not below 0.05 f(8)");
    auto mc = estimate_speed(g, lattice_key(0, 0), {24, 32}, alpha, kSpeedSamples, kSpeedSeed);
    o.require(mc[0].estimate - mc[0].ci_halfwidth <= to_double(f(kSpeedHi)), "estimate at 24 above exact f(18)");
    o.require(mc[1].estimate - mc[1].ci_halfwidth <= mc[0].estimate + mc[0].ci_halfwidth, "estimate at 32 above 24");
    // context only: the graph is bipartite, so each parity class is reported separately
    bool odd = true, even = true;
    for (int n = kSpeedLo + 2; n <= kSpeedHi; ++n) (n % 2 ? odd : even) = (n % 2 ? odd : even) && f(n) <= f(n - 2);
    o.detail << std::setprecision(4) << "f:";
    for (int n = kSpeedLo; n <= kSpeedHi; ++n) o.detail << " " << to_double(f(n));
    o.detail << " | per-parity nonincreasing odd=" << odd << " even=" << even << " | mc24=" << mc[0].estimate << "+-"
             << mc[0].ci_halfwidth << " mc32=" << mc[1].estimate << "+-" << mc[1].ci_halfwidth
             << " failures=" << mc[0].failures + mc[1].failures;
}

void ac5(Outcome& o) {
    auto fp = fixtures::c3_c3();
    std::vector<Named> cases{{"cylinder4", build_cylinder(4), lattice_key(0, 0)},
                             {"C3*C3", fp.oracle(), FreeProductGraph::root()}};
    const Rational a(1, 8);
    for (auto& z : cases) {
        auto st = displacement_stats(z.g, z.v, kTailN, {a}, 1);
        double tail = nth_root(st.tail_counts.at(a), kTailN), all = nth_root(st.total, kTailN);
        double rel = (all - tail) / all;
        o.require(rel <= kTailTolerance, z.name + " tail root " + std::to_string(rel) + " below");
        o.detail << std::setprecision(6) << z.name << " tail-root=" << tail << " root=" << all << " rel=" << rel << " ";
    }
}

void ac6(Outcome& o) {
    auto fp = fixtures::c3_c3();
    struct Case {
        std::string name;
        GraphOracle g;
        VertexKey v;
        CutSet cs;
        int n;
    };
    std::vector<Case> cases{{"cyl3", build_cylinder(3), lattice_key(0, 0), cylinder_cutset(3), 12},
                            {"cyl4", build_cylinder(4), lattice_key(0, 0), cylinder_cutset(4), 11},
                            {"cyl4-stride2", build_cylinder(4), lattice_key(1, 0), cylinder_cutset(4, 2), 11},
                            {"C3*C3", fp.oracle(), FreeProductGraph::root(), free_product_root_cutset(fp), 10}};
    int configs = 0;
    for (auto& c : cases) {
        const int s = static_cast<int>(c.cs.S.size());
        auto all = count_walks(c.g, c.v, c.n);
        for (std::optional<int> m : {std::optional<int>{}, std::optional<int>{2}}) {
            auto star_h = occurrence_histogram(c.g, c.v, c.n, c.cs, EventKind::estar(m));
            std::vector<std::vector<std::vector<BigInt>>> tilde;
            for (int k = 1; k <= s; ++k) tilde.push_back(occurrence_histogram(c.g, c.v, c.n, c.cs, EventKind::e_tilde(k, m)));
            auto upto = [](const std::vector<BigInt>& row, int r) {
                BigInt x = 0;
                for (int q = 0; q <= r && q < static_cast<int>(row.size()); ++q) x += row[q];
                return x;
            };
            for (int n = 0; n <= c.n; ++n) {
                for (int r = 0; r <= n + 1; ++r) {
                    ++configs;
                    auto star = upto(star_h[n], r), top = upto(tilde[s - 1][n], r);
                    o.require(star <= top && top <= all[n], c.name + " sandwich n=" + std::to_string(n));
                    for (int k = 1; k < s; ++k)
                        o.require(upto(tilde[k - 1][n], r) <= upto(tilde[k][n], r), c.name + " k-monotone");
                    o.require(upto(tilde[0][n], r) <= upto(tilde[0][n], r + 1), c.name + " r-monotone");
                    o.require(star <= upto(star_h[n], r + 1), c.name + " r-monotone E*");
                }
            }
        }
    }
    auto g = build_cylinder(4);
    auto cs = cylinder_cutset(4, 2);
    auto all = count_walks(g, lattice_key(0, 0), kPatternN);
    auto e1 = count_restricted_sup(g, {lattice_key(0, 0), lattice_key(1, 0)}, kPatternN, cs, EventKind::e_tilde(1), 0);
    double mu_n = nth_root(all[kPatternN], kPatternN), lam = e1.lambda_roots[kPatternN];
    o.require(lam <= (1 - kPatternGap) * mu_n, "restricted-orbit root not 5% below");
    o.detail << configs << " (n,r,m) configurations; lambda-root(E~1,n=14)=" << lam << " c_n root=" << mu_n;
}

void ac7(Outcome& o) {
    auto fp = fixtures::c3_c3();
    struct Case {
        std::string name;
        GraphOracle g;
        VertexKey v;
        CutSet cs;
        int n;
        std::function<int(const std::vector<VertexKey>&, const VertexKey&)> side;
    };
    auto fp_side = [&](const std::vector<VertexKey>& copy, const VertexKey& x) {
        return oracle::free_product_side(*fp, copy, x);
    };
    std::vector<Case> cases{
        {"cylinder4", build_cylinder(4), lattice_key(0, 0), cylinder_cutset(4), 24, oracle::cylinder_side},
        {"C3*C3", fp.oracle(), FreeProductGraph::root(), free_product_root_cutset(fp), 16, fp_side}};
    for (auto& c : cases) {
        auto rep = validate_cutset(c.g, c.cs, 6);
        if (!rep.measured_N) {
            o.require(false, c.name + " bridge constant not measured");
            continue;
        }
        const int N = *rep.measured_N, bound = N + 2 * kSurgeryN0;
        int ok = 0, max_increase = 0, crossings = 0;
        for (int i = 0; i < kSurgeries; ++i) {
            auto rng = sample_stream(7007, i);
            auto w = dimerize(c.g, c.v, c.n, rng);
            if (!w) {
                o.require(false, c.name + " sampler failure");
                continue;
            }
            // odd trials use the crossing variant when the walk offers one
            std::vector<SurgeryStep> cand;
            if (i % 2) cand = crossing_candidates(c.g, *w, c.cs);
            if (cand.empty()) cand = connector_candidates(c.g, *w, c.cs, kSurgeryN0);
            if (cand.empty()) {
                o.require(false, c.name + " no candidate");
                continue;
            }
            auto step = cand[uniform_below(rng, cand.size())];
            crossings += step.variant == SurgeryVariant::Crossing;
            SurgeryResult r;
            try {
                r = single_surgery(c.g, *w, step, c.cs);
            } catch (const Error& e) {
                o.require(false, c.name + " trial " + std::to_string(i) + ": " + e.what());
                continue;
            }
            bool good = static_cast<bool>(verify_saw(c.g, r.walk));
            for (int j = 0; j <= step.split_index; ++j) good = good && r.walk[j] == (*w)[j];
            const int tail = w->steps() + 1 - r.suffix_source;
            good = good && r.walk.steps() + 1 - r.suffix_start == tail;
            for (int j = 0; good && j < tail; ++j)
                good = r.walk[r.suffix_start + j] == r.automorphism((*w)[r.suffix_source + j]);
            VertexKey before = step.variant == SurgeryVariant::Connector ? (*w)[step.split_index] : (*w)[r.suffix_source];
            VertexKey after = step.variant == SurgeryVariant::Connector ? r.automorphism(before) : r.walk[r.suffix_start];
            good = good && c.side(step.cut_copy.vertices, before) != c.side(step.cut_copy.vertices, after);
            good = good && r.length_increase <= bound;
            max_increase = std::max(max_increase, r.length_increase);
            ok += good;
            if (!good) o.require(false, c.name + " trial " + std::to_string(i) + " violates a property");
        }
        o.detail << c.name << ": " << ok << "/" << kSurgeries << " ok (" << crossings << " crossing), N=" << N
                 << " N0=" << kSurgeryN0 << " max increase=" << max_increase << " bound=" << bound << "; ";
    }
}

template <class Group, class Gen>
void confluence(Outcome& o, const std::string& name, const Group& g, Gen gen, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < kWords; ++i) {
        auto w = gen(rng);
        auto a = g.reduce(w), b = g.reduce_left_to_right(w);
        o.require(a == b, name + " word " + std::to_string(i));
        if (a != b) return;
    }
    for (int i = 0; i < 1000; ++i) {
        auto a = g.reduce(gen(rng)), b = g.reduce(gen(rng)), c = g.reduce(gen(rng));
        bool ok = g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c)) && g.multiply(a, g.identity()) == a &&
                  g.multiply(g.identity(), a) == a && g.multiply(a, g.inverse(a)) == g.identity() &&
                  g.decode(a.key()) == a;
        o.require(ok, name + " group axioms");
        if (!ok) return;
    }
    o.detail << name << " ok; ";
}

void ac8(Outcome& o) {
    auto p1 = fixtures::z2_z3(), p2 = fixtures::z4_z2_z6();
    auto p3 = fixtures::hnn_z4();
    confluence(o, "Z2*Z3", AmalgamGroup(p1), [&](auto& r) { return fixtures::random_amalgam_word(*p1, 1 + r() % 16, r); }, 81);
    confluence(o, "Z4*Z2Z6", AmalgamGroup(p2), [&](auto& r) { return fixtures::random_amalgam_word(*p2, 1 + r() % 16, r); }, 82);
    confluence(o, "HNN(Z4,Z2,id)", HnnGroup(p3), [&](auto& r) { return fixtures::random_hnn_word(*p3, 1 + r() % 16, r); }, 83);
}

void ac9(Outcome& o) {
    // amalgam: the cut is every vertex within D0+1 of C in G0 = G
    {
        auto cg = fixtures::amalgam_graph(fixtures::z4_z2_z6());
        const auto& G = cg.group();
        std::vector<AmalgamGroup::Element> gens = cg.generators();
        int d0 = generator_stretch(cg, gens, 4);
        std::vector<VertexKey> C{G.identity().key(), G.reduce(std::vector<AmalgamLetter>{{Factor::H, 2}}).key()};
        auto cut = neighborhood(cg.oracle(), C, d0 + 1);
        int m0 = 0;
        for (auto& k : cut) m0 = std::max(m0, G.decode(k).length());
        std::mt19937_64 rng(91);
        auto draw = [&](Factor lead) {
            while (true) {
                auto e = G.reduce(fixtures::random_amalgam_word(G.presentation(), 2 * m0 + 6, rng));
                if (e.length() > m0 && e.leading_factor() == lead) return e;
            }
        };
        int sep = 0, ctrl = 0;
        for (int i = 0; i < kPairs; ++i) {
            auto u = draw(Factor::H), v = draw(Factor::K);
            sep += separation_test(cg.oracle(), u.key(), v.key(), cut, kSeparationRadius) == Separation::Separated;
            // control: extend u by letters that never cancel; every vertex on the way keeps length > m0
            auto x = u;
            for (int s = 0; s < 3; ++s) {
                Factor next = other(x.syllables.back().factor);
                // 1 lies outside C in both factors
                x = G.multiply(x, G.reduce(std::vector<AmalgamLetter>{{next, 1}}));
                if (x.length() <= m0) o.require(false, "control path entered the cut");
            }
            ctrl += separation_test(cg.oracle(), u.key(), x.key(), cut, kSeparationRadius) ==
                    Separation::NotSeparatedWithinRadius;
        }
        o.require(sep == kPairs, "amalgam separated " + std::to_string(sep));
        o.require(ctrl == kPairs, "amalgam controls " + std::to_string(ctrl));
        o.detail << "Z4*Z2Z6 D0=" << d0 << " |cut|=" << cut.size() << " separated " << sep << "/" << kPairs << " controls "
                 << ctrl << "/" << kPairs << "; ";
    }
    // HNN: S0 = vertices within D0/2 of C1 u C2
    {
        auto cg = fixtures::hnn_graph(fixtures::hnn_z4());
        const auto& G = cg.group();
        int d0 = generator_stretch(cg, cg.generators(), 4);
        std::vector<VertexKey> C{G.identity().key(), G.reduce(std::vector<HnnLetter>{HnnLetter::h(2)}).key()};
        auto cut = neighborhood(cg.oracle(), C, d0 / 2);
        std::mt19937_64 rng(92);
        auto in_c1 = [](int g0) { return g0 == 0 || g0 == 2; };
        auto draw = [&](int eps, bool g0_in_c) {
            while (true) {
                auto e = G.reduce(fixtures::random_hnn_word(G.presentation(), 2 + rng() % 8, rng));
                if (e.length() == 0 || e.syllables.front().exponent != eps) continue;
                if (g0_in_c != in_c1(e.g0)) continue;
                if (cut.count(e.key())) continue;
                return e;
            }
        };
        int sep = 0, ctrl = 0;
        for (int i = 0; i < kPairs; ++i) {
            // cycle through the four hypotheses (C1 = C2 here)
            HnnElement u, v;
            switch (i % 4) {
                case 0: v = draw(1, true), u = draw(-1, rng() % 2); break;
                case 1: v = draw(-1, true), u = draw(1, rng() % 2); break;
                case 2: v = draw(1, true), u = draw(1, false); break;
                default: v = draw(-1, true), u = draw(-1, false); break;
            }
            sep += separation_test(cg.oracle(), u.key(), v.key(), cut, kSeparationRadius) == Separation::Separated;
            // control: push along the last t-direction, then move in H; lengths stay >= 1
            auto x = u;
            int eps = x.syllables.back().exponent;
            for (int s = 0; s < 2; ++s) {
                x = G.multiply(x, G.reduce(std::vector<HnnLetter>{HnnLetter::t(eps)}));
                if (cut.count(x.key())) o.require(false, "control path entered S0");
            }
            x = G.multiply(x, G.reduce(std::vector<HnnLetter>{HnnLetter::h(1)}));
            ctrl += separation_test(cg.oracle(), u.key(), x.key(), cut, kSeparationRadius) ==
                    Separation::NotSeparatedWithinRadius;
        }
        o.require(sep == kPairs, "hnn separated " + std::to_string(sep));
        o.require(ctrl == kPairs, "hnn controls " + std::to_string(ctrl));
        o.detail << "HNN D0=" << d0 << " |S0|=" << cut.size() << " separated " << sep << "/" << kPairs << " controls "
                 << ctrl << "/" << kPairs;
    }
}

void ac10(Outcome& o) {
    auto g = build_cylinder(3);
    auto walks = oracle::all_walks(g, lattice_key(0, 0), kChiN);
    std::map<std::vector<VertexKey>, int> index;
    for (std::size_t i = 0; i < walks.size(); ++i) index[walks[i]] = static_cast<int>(i);
    std::vector<double> freq(walks.size(), 0);
    int failures = 0;
    for (int i = 0; i < kChiSamples; ++i) {
        auto rng = sample_stream(kCalibrationSeed, i);
        auto w = dimerize(g, lattice_key(0, 0), kChiN, rng);
        if (!w) {
            ++failures;
            continue;
        }
        freq[index.at(w->vertices)] += 1;
    }
    double expect = static_cast<double>(kChiSamples - failures) / walks.size(), chi2 = 0;
    for (double f : freq) chi2 += (f - expect) * (f - expect) / expect;
    boost::math::chi_squared dist(static_cast<double>(walks.size() - 1));
    double p = boost::math::cdf(boost::math::complement(dist, chi2));
    o.require(failures == 0, "sampler failures");
    o.require(p > kChiLevel, "chi-square p=" + std::to_string(p));
    o.detail << std::setprecision(4) << "chi2=" << chi2 << " dof=" << walks.size() - 1 << " p=" << p << "; ";

    std::vector<int> ns;
    for (int n = 1; n <= kCalibrationMaxN; ++n) ns.push_back(n);
    SpeedConfig cfg;
    cfg.exact_limit = kCalibrationMaxN;
    auto runs = estimate_speed(g, lattice_key(0, 0), ns, Rational(1, 4), kCalibrationSamples, kCalibrationSeed, cfg);
    int inside = 0;
    for (auto& r : runs) {
        bool ok = std::abs(r.estimate - *r.exact_fraction) <= r.ci_halfwidth;
        inside += ok;
        if (!ok)
            o.require(false, "n=" + std::to_string(r.n) + " est " + std::to_string(r.estimate) + " exact " +
                                 std::to_string(*r.exact_fraction) + " ci " + std::to_string(r.ci_halfwidth));
    }
    o.detail << "tail estimates inside CI for " << inside << "/" << runs.size() << " lengths";
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria{
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
        {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}};
    bool all = true;
    for (auto& [name, fn] : criteria) {
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << name << " " << (o.pass ? "PASS" : "FAIL") << " [" << std::fixed << std::setprecision(1) << secs
                  << "s] " << std::defaultfloat << o.detail.str() << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
