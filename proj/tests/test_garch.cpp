#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dccanet/error.hpp"
#include "dccanet/garch.hpp"
#include "dccanet/nelder_mead.hpp"
#include "dccanet/simulate.hpp"
#include "support.hpp"

namespace {

using namespace dccanet;
using dccanet::testing::normals;
using dccanet::testing::raw_kurtosis;

TEST(NelderMead, Rosenbrock) {
  const std::function<double(const std::array<double, 2>&)> f = [](const std::array<double, 2>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const auto r = nelder_mead<2>(f, {-1.2, 1.0}, {1e-10, 5000, 0.5});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
  EXPECT_NEAR(r.x[1], 1.0, 1e-5);
}

TEST(NelderMead, ReportsBudgetExhaustion) {
  const std::function<double(const std::array<double, 1>&)> f = [](const std::array<double, 1>& x) {
    return (x[0] - 3.0) * (x[0] - 3.0);
  };
  const auto r = nelder_mead<1>(f, {0.0}, {1e-14, 3, 0.5});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3);
}

TEST(Garch, ConditionalVarianceRecursion) {
  const std::vector<double> r{1.0, -2.0, 0.5};
  const garch::GarchParams p{0.1, 0.2, 0.7};
  const auto h = garch::conditional_variance(r, p, 2.0);
  EXPECT_DOUBLE_EQ(h[0], 2.0);
  EXPECT_DOUBLE_EQ(h[1], 0.1 + 0.2 * 1.0 + 0.7 * 2.0);
  EXPECT_DOUBLE_EQ(h[2], 0.1 + 0.2 * 4.0 + 0.7 * h[1]);
}

TEST(Garch, LogLikelihoodMatchesDirectSum) {
  const std::vector<double> r{0.3, -1.1, 0.4, 0.9, -0.2};
  const garch::GarchParams p{0.2, 0.1, 0.8};
  double mean = 0.0;
  for (double v : r) mean += v / 5.0;
  double var = 0.0;
  for (double v : r) var += (v - mean) * (v - mean) / 5.0;
  double h = var, ll = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    if (t) h = 0.2 + 0.1 * r[t - 1] * r[t - 1] + 0.8 * h;
    ll += -0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * std::log(h) - 0.5 * r[t] * r[t] / h;
  }
  EXPECT_NEAR(garch::log_likelihood(r, p), ll, 1e-12);
}

TEST(Garch, RecoversSimulatedParameters) {
  const garch::GarchParams truth{0.05, 0.10, 0.85};
  const auto r = simulate::garch_path(truth, 5000, 2024);
  const auto fit = garch::fit(r);
  EXPECT_TRUE(fit.params.feasible());
  EXPECT_NEAR(fit.params.alpha, 0.10, 0.05);
  EXPECT_NEAR(fit.params.beta, 0.85, 0.05);
  // the optimum cannot be worse than the data-generating point
  EXPECT_GE(fit.log_likelihood, garch::log_likelihood(r, truth) - 1e-9);
  EXPECT_NEAR(fit.log_likelihood, garch::log_likelihood(r, fit.params), 1e-9);
}

TEST(Garch, WhiteNoiseHasNoArchEffect) {
  const auto r = normals(5000, 99);
  const auto fit = garch::fit(r);
  EXPECT_LE(fit.params.alpha, 0.05);
  EXPECT_NEAR(fit.params.unconditional_variance(), 1.0, 0.1);
}

TEST(Garch, FilterConstantVariance) {
  garch::GarchFit fit;
  fit.h = {4.0, 4.0, 4.0};
  const auto z = garch::filter(std::vector<double>{2.0, -2.0, 4.0}, fit);
  EXPECT_EQ(z, (std::vector<double>{1.0, -1.0, 2.0}));
  fit.h = {4.0, 0.0, 4.0};
  EXPECT_THROW(garch::filter(std::vector<double>{2.0, -2.0, 4.0}, fit), Error);
  fit.h = {4.0};
  EXPECT_THROW(garch::filter(std::vector<double>{2.0, -2.0, 4.0}, fit), Error);
}

TEST(Garch, FilteringReducesKurtosis) {
  const auto r = simulate::garch_path({0.05, 0.10, 0.85}, 5000, 17);
  garch::GarchFit fit;
  const auto z = garch::fit_and_filter(r, &fit);
  ASSERT_EQ(z.size(), r.size());
  EXPECT_LT(raw_kurtosis(z), raw_kurtosis(r));
  EXPECT_TRUE(std::all_of(fit.h.begin(), fit.h.end(), [](double h) { return h > 0.0; }));
}

TEST(Garch, Preconditions) {
  EXPECT_THROW(garch::fit(normals(10, 1)), Error);
  EXPECT_THROW(garch::fit(std::vector<double>(100, 0.0)), Error);
}

TEST(Garch, Deterministic) {
  const auto r = simulate::garch_path({0.05, 0.10, 0.85}, 800, 5);
  const auto a = garch::fit(r);
  const auto b = garch::fit(r);
  EXPECT_EQ(a.params.omega, b.params.omega);
  EXPECT_EQ(a.params.alpha, b.params.alpha);
  EXPECT_EQ(a.h, b.h);
}

}  // namespace
