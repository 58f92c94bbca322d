#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "photocount/counting.hpp"
#include "photocount/sampling.hpp"

using namespace photocount;

TEST(SampleCounts, MeanWithinFourStandardErrors) {
    const ScatteringStrengths s({0.05, 0.3, 0.55, 0.9}, Regime::Absorbing);
    const auto w = CountingWindow::from_nu(4, 6.0);
    const OccupationFactor f(1.2);
    const auto counts = sample_counts(s, w, f, 100000, 42);
    const auto m = mean_variance(factorial_cumulants(s, w, f, 2));
    const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / counts.size();
    EXPECT_LT(std::abs(mean - m.mean), 4.0 * std::sqrt(m.variance / counts.size()));
}

TEST(SampleCounts, LosslessGivesZeros) {
    const auto counts = sample_counts(ScatteringStrengths({1.0, 1.0, 1.0}, Regime::Absorbing),
                                      CountingWindow::from_nu(3, 4.0), OccupationFactor(2.0), 1000, 1);
    for (auto c : counts) EXPECT_EQ(c, 0);
}

TEST(SampleCounts, DeterministicAndWorkerIndependent) {
    const ScatteringStrengths s({0.2, 0.7}, Regime::Absorbing);
    const auto w = CountingWindow::from_nu(2, 3.0);
    const OccupationFactor f(0.9);
    SamplerOptions one, four;
    one.workers = 1;
    four.workers = 4;
    one.chunk_size = four.chunk_size = 1000;
    const auto a = sample_counts(s, w, f, 20000, 99, one);
    const auto b = sample_counts(s, w, f, 20000, 99, four);
    const auto c = sample_counts(s, w, f, 20000, 99, one);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    EXPECT_NE(a, sample_counts(s, w, f, 20000, 100, one));
}

TEST(SampleCounts, HistogramMatchesPmf) {
    const ScatteringStrengths s({0.4, 0.6, 0.75, 0.8, 0.9}, Regime::Absorbing);
    const auto w = CountingWindow::from_nu(5, 10.0);
    const OccupationFactor f(1.0);
    const auto pmf = pmf_from_strengths(s, w, f, 200);
    const auto counts = sample_counts(s, w, f, 200000, 5);
    std::vector<double> hist(201, 0.0);
    for (auto c : counts) hist[std::min<std::int64_t>(c, 200)] += 1.0 / counts.size();
    double tv = 0.0;
    for (std::size_t n = 0; n <= 200; ++n) tv += 0.5 * std::abs(hist[n] - pmf.probs[n]);
    EXPECT_LT(tv, 0.01);
}
