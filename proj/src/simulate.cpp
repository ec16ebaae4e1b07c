#include "dccanet/simulate.hpp"

#include <cmath>
#include <random>

#include "dccanet/error.hpp"

namespace dccanet::simulate {

Eigen::MatrixXd correlated_normals(std::size_t t, const Eigen::MatrixXd& correlation,
                                   std::uint64_t seed) {
  const Eigen::LLT<Eigen::MatrixXd> llt(correlation);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::invalid_argument, "correlation matrix is not positive definite");
  }
  const Eigen::MatrixXd lower = llt.matrixL();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto n = correlation.rows();
  Eigen::MatrixXd z(static_cast<Eigen::Index>(t), n);
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    for (Eigen::Index c = 0; c < n; ++c) z(r, c) = normal(rng);
  }
  return z * lower.transpose();
}

Eigen::MatrixXd equicorrelation(std::size_t n, double rho) {
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(size, size, rho);
  m.diagonal().setOnes();
  return m;
}

std::vector<double> garch_path(const garch::GarchParams& params, std::size_t t, std::uint64_t seed,
                               std::size_t burn_in) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double h = params.unconditional_variance();
  double previous = 0.0;
  std::vector<double> out;
  out.reserve(t);
  for (std::size_t k = 0; k < t + burn_in; ++k) {
    if (k > 0) h = params.omega + params.alpha * previous * previous + params.beta * h;
    previous = std::sqrt(h) * normal(rng);
    if (k >= burn_in) out.push_back(previous);
  }
  return out;
}

Eigen::MatrixXd var1_path(const Eigen::MatrixXd& phi, std::size_t t, std::uint64_t seed,
                          std::size_t burn_in) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto n = phi.rows();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(t), n);
  for (std::size_t k = 0; k < t + burn_in; ++k) {
    Eigen::VectorXd e(n);
    for (Eigen::Index c = 0; c < n; ++c) e(c) = normal(rng);
    y = phi * y + e;
    if (k >= burn_in) out.row(static_cast<Eigen::Index>(k - burn_in)) = y.transpose();
  }
  return out;
}

std::vector<Date> business_days(Date first, std::size_t count) {
  std::vector<Date> out;
  out.reserve(count);
  Date d = first;
  while (out.size() < count) {
    const std::chrono::weekday wd{d};
    if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) out.push_back(d);
    d += std::chrono::days{1};
  }
  return out;
}

PricePanel panel_from_returns(const Eigen::MatrixXd& returns, const std::vector<std::string>& tickers) {
  if (static_cast<Eigen::Index>(tickers.size()) != returns.cols()) {
    throw Error(ErrorCode::invalid_argument, "ticker count does not match return columns");
  }
  PricePanel panel;
  panel.tickers = tickers;
  panel.dates = business_days(parse_date("2013-03-05"), static_cast<std::size_t>(returns.rows()) + 1);
  panel.prices.resize(returns.rows() + 1, returns.cols());
  panel.prices.row(0).setConstant(100.0);
  for (Eigen::Index r = 0; r < returns.rows(); ++r) {
    panel.prices.row(r + 1) = panel.prices.row(r).array() * returns.row(r).array().exp();
  }
  return panel;
}

Eigen::MatrixXd regime_returns(std::size_t n, std::size_t t, double rho_before, double rho_after,
                               std::size_t jump, double volatility, std::uint64_t seed) {
  const Eigen::MatrixXd before = correlated_normals(t, equicorrelation(n, rho_before), seed);
  const Eigen::MatrixXd after = correlated_normals(t, equicorrelation(n, rho_after), seed + 1);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < t; ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    out.row(row) = volatility * (r < jump ? before.row(row) : after.row(row));
  }
  return out;
}

std::vector<std::string> default_tickers(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back("S" + std::to_string(k + 1));
  return out;
}

}  // namespace dccanet::simulate
