#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dccanet/garch.hpp"
#include "dccanet/ingest.hpp"

/// Seeded generators for synthetic data used by tests, the acceptance suite
/// and the `simulate` CLI command.
namespace dccanet::simulate {

/// T x N i.i.d. Gaussian draws with correlation matrix `correlation` and unit
/// variances.
Eigen::MatrixXd correlated_normals(std::size_t t, const Eigen::MatrixXd& correlation,
                                   std::uint64_t seed);

/// N x N matrix with unit diagonal and `rho` elsewhere.
Eigen::MatrixXd equicorrelation(std::size_t n, double rho);

/// Gaussian GARCH(1,1) returns, started from the unconditional variance.
std::vector<double> garch_path(const garch::GarchParams& params, std::size_t t, std::uint64_t seed,
                               std::size_t burn_in = 500);

/// y_t = phi y_{t-1} + e_t with e_t ~ N(0, I), zero start plus burn-in.
Eigen::MatrixXd var1_path(const Eigen::MatrixXd& phi, std::size_t t, std::uint64_t seed,
                          std::size_t burn_in = 200);

/// Consecutive weekdays starting at `first`.
std::vector<Date> business_days(Date first, std::size_t count);

/// Prices 100 * exp(cumsum(returns)) with a leading row of 100s, so T returns
/// give T + 1 price rows dated by business days from 2013-03-05.
PricePanel panel_from_returns(const Eigen::MatrixXd& returns, const std::vector<std::string>& tickers);

/// Equicorrelated Gaussian returns (daily scale `volatility`) whose correlation
/// switches from `rho_before` to `rho_after` at return index `jump`.
Eigen::MatrixXd regime_returns(std::size_t n, std::size_t t, double rho_before, double rho_after,
                               std::size_t jump, double volatility, std::uint64_t seed);

std::vector<std::string> default_tickers(std::size_t n);

}  // namespace dccanet::simulate
