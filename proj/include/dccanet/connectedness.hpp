#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dccanet/error.hpp"

namespace dccanet::connectedness {

/// y_t = intercept + sum_k coefficients[k-1] y_{t-k} + e_t,  Cov(e) = sigma.
struct VarModel {
  int p = 0;
  std::vector<Eigen::MatrixXd> coefficients;
  Eigen::VectorXd intercept;
  Eigen::MatrixXd sigma;
  double spectral_radius = 0.0;  // of the companion matrix
  bool explosive = false;        // spectral_radius >= 1
};

/// Equation-by-equation OLS with intercept on a T x N matrix. Residual
/// covariance uses denominator T - p. Requires T >= N p + N + 10; throws
/// Error(rank_deficient) if the regressors are collinear.
VarModel fit_var(const Eigen::MatrixXd& returns, int p);

/// Moving-average matrices A_0 = I, A_h = sum_{k=1}^{min(h,p)} Phi_k A_{h-k}.
std::vector<Eigen::MatrixXd> ma_coefficients(const VarModel& model, int count);

/// Raw generalized variance decomposition theta (rows not normalized) for an
/// H-step forecast horizon.
Eigen::MatrixXd gvd(const VarModel& model, int horizon);

struct ConnectednessTable {
  Eigen::MatrixXd d;  // percentages, rows sum to 100
  Eigen::VectorXd from_degree;
  Eigen::VectorXd to_degree;
  Eigen::VectorXd net_degree;
  double total = 0.0;
};

ConnectednessTable connectedness_table(const Eigen::MatrixXd& theta);

struct RollingEntry {
  std::size_t window = 0;  // rows [window, window + w)
  ConnectednessTable table;
  bool explosive = false;
};

struct RollingConnectedness {
  std::vector<RollingEntry> entries;  // ordered by window
  std::vector<WindowGap> gaps;
};

/// Connectedness over every window of `w` consecutive rows. Per-window failures
/// become gaps.
RollingConnectedness rolling_total_connectedness(const Eigen::MatrixXd& returns, int w, int p,
                                                 int horizon, unsigned threads = 1);

}  // namespace dccanet::connectedness
