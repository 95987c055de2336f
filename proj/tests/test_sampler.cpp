#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace sawends;

TEST(Sampler, UniformBelowStaysInRange) {
    auto rng = sample_stream(3, 0);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) ++hits[uniform_below(rng, 7)];
    for (int h : hits) EXPECT_GT(h, 800);
    EXPECT_EQ(uniform_below(rng, 1), 0u);
}

TEST(Sampler, StreamsAreReproducibleAndDistinct) {
    auto a = sample_stream(5, 1), b = sample_stream(5, 1), c = sample_stream(5, 2), d = sample_stream(6, 1);
    auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
}

TEST(Sampler, DimerizedWalksAreSaws) {
    auto fp = fixtures::c3_c3();
    for (auto [g, v] : {std::pair{build_cylinder(3), lattice_key(0, 0)}, std::pair{build_square_lattice(), lattice_key(0, 0)},
                        std::pair{fp.oracle(), FreeProductGraph::root()}}) {
        for (int n : {1, 2, 5, 13, 30}) {
            auto rng = sample_stream(9, n);
            auto w = dimerize(g, v, n, rng);
            ASSERT_TRUE(w);
            EXPECT_EQ(w->steps(), n);
            EXPECT_EQ(w->origin(), v);
            EXPECT_TRUE(verify_saw(g, *w));
        }
    }
    auto rng = sample_stream(1, 1);
    EXPECT_THROW(dimerize(build_cylinder(3), lattice_key(0, 0), 0, rng), InvalidParameter);
}

TEST(Sampler, BudgetExhaustionIsReported) {
    auto rng = sample_stream(1, 1);
    DimerizeConfig cfg;
    cfg.budget = 0;
    int fails = 0;
    for (int i = 0; i < 20; ++i) fails += !dimerize(build_square_lattice(), lattice_key(0, 0), 40, rng, cfg).has_value();
    EXPECT_GT(fails, 0);
}

TEST(Sampler, DimerizationIsUniformAtSmallLength) {
    // chi-square goodness of fit against the uniform law on all 5-step SAWs
    auto g = build_cylinder(3);
    auto walks = oracle::all_walks(g, lattice_key(0, 0), 5);
    std::map<std::vector<VertexKey>, int> index;
    for (std::size_t i = 0; i < walks.size(); ++i) index[walks[i]] = static_cast<int>(i);
    std::vector<double> freq(walks.size(), 0);
    const int samples = 20000;
    for (int i = 0; i < samples; ++i) {
        auto rng = sample_stream(2024, i);
        auto w = dimerize(g, lattice_key(0, 0), 5, rng);
        ASSERT_TRUE(w);
        freq[index.at(w->vertices)] += 1;
    }
    double expect = static_cast<double>(samples) / walks.size(), chi2 = 0;
    for (double f : freq) chi2 += (f - expect) * (f - expect) / expect;
    boost::math::chi_squared dist(static_cast<double>(walks.size() - 1));
    double p = boost::math::cdf(boost::math::complement(dist, chi2));
    RecordProperty("p_value", std::to_string(p));
    EXPECT_GT(p, 0.01) << "chi2=" << chi2;
}

TEST(Sampler, EstimatesIndependentOfWorkers) {
    auto g = build_cylinder(3);
    SpeedConfig one, four;
    four.workers = 4;
    auto a = estimate_speed(g, lattice_key(0, 0), {6, 10}, Rational(1, 4), 500, 99, one);
    auto b = estimate_speed(g, lattice_key(0, 0), {6, 10}, Rational(1, 4), 500, 99, four);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].hits, b[i].hits);
        EXPECT_EQ(a[i].accepted, b[i].accepted);
        EXPECT_EQ(a[i].mean_sq_estimate, b[i].mean_sq_estimate);
    }
}

TEST(Sampler, ParameterChecks) {
    auto g = build_cylinder(3);
    EXPECT_THROW(estimate_speed(g, lattice_key(0, 0), {4}, Rational(0), 10, 1), InvalidParameter);
    EXPECT_THROW(estimate_speed(g, lattice_key(0, 0), {4}, Rational(1), 10, 1), InvalidParameter);
    EXPECT_THROW(estimate_speed(g, lattice_key(0, 0), {4}, Rational(1, 2), 0, 1), InvalidParameter);
    EXPECT_THROW(estimate_speed(g, lattice_key(0, 0), {0}, Rational(1, 2), 10, 1), InvalidParameter);
}

TEST(Sampler, TailEstimatesCoverExactValues) {
    // seeds 1..20 fixed in advance; coverage of the 95% interval in >= 95% of them
    auto g = build_cylinder(3);
    SpeedConfig cfg;
    cfg.exact_limit = 8;
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto r = estimate_speed(g, lattice_key(0, 0), {8}, Rational(1, 4), 2000, seed, cfg).front();
        ASSERT_TRUE(r.exact_fraction);
        EXPECT_EQ(r.failures, 0);
        covered += std::abs(r.estimate - *r.exact_fraction) <= r.ci_halfwidth;
    }
    RecordProperty("covered", covered);
    EXPECT_GE(covered, 19);
}
