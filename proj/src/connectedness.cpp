#include "dccanet/connectedness.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "dccanet/parallel.hpp"

namespace dccanet::connectedness {

VarModel fit_var(const Eigen::MatrixXd& returns, int p) {
  const auto t = returns.rows();
  const auto n = returns.cols();
  if (p < 1) throw Error(ErrorCode::invalid_argument, "VAR lag order must be at least 1");
  if (n < 1 || t < n * p + n + 10) {
    throw Error(ErrorCode::too_short, "VAR(" + std::to_string(p) + ") on " + std::to_string(n) +
                                          " variables needs at least " +
                                          std::to_string(n * p + n + 10) + " observations, got " +
                                          std::to_string(t));
  }
  if (!returns.allFinite()) throw Error(ErrorCode::invalid_argument, "VAR input is not finite");

  const auto rows = t - p;
  Eigen::MatrixXd x(rows, 1 + n * p);
  x.col(0).setOnes();
  for (int k = 1; k <= p; ++k) x.middleCols(1 + (k - 1) * n, n) = returns.middleRows(p - k, rows);
  const Eigen::MatrixXd y = returns.bottomRows(rows);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < x.cols()) {
    throw Error(ErrorCode::rank_deficient, "VAR regressor matrix is rank deficient");
  }
  const Eigen::MatrixXd beta = qr.solve(y);  // (1 + N p) x N
  const Eigen::MatrixXd residuals = y - x * beta;

  VarModel model;
  model.p = p;
  model.intercept = beta.row(0).transpose();
  for (int k = 1; k <= p; ++k) {
    model.coefficients.push_back(beta.middleRows(1 + (k - 1) * n, n).transpose());
  }
  model.sigma = residuals.transpose() * residuals / static_cast<double>(rows);
  model.sigma = 0.5 * (model.sigma + model.sigma.transpose());

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n * p, n * p);
  for (int k = 0; k < p; ++k) companion.block(0, k * n, n, n) = model.coefficients[static_cast<std::size_t>(k)];
  if (p > 1) companion.bottomLeftCorner(n * (p - 1), n * (p - 1)).setIdentity();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  model.spectral_radius = solver.eigenvalues().cwiseAbs().maxCoeff();
  model.explosive = model.spectral_radius >= 1.0;
  return model;
}

std::vector<Eigen::MatrixXd> ma_coefficients(const VarModel& model, int count) {
  const auto n = model.sigma.rows();
  std::vector<Eigen::MatrixXd> a;
  a.reserve(static_cast<std::size_t>(count));
  for (int h = 0; h < count; ++h) {
    if (h == 0) {
      a.push_back(Eigen::MatrixXd::Identity(n, n));
      continue;
    }
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k <= std::min(h, model.p); ++k) {
      next += model.coefficients[static_cast<std::size_t>(k - 1)] * a[static_cast<std::size_t>(h - k)];
    }
    a.push_back(std::move(next));
  }
  return a;
}

Eigen::MatrixXd gvd(const VarModel& model, int horizon) {
  if (horizon < 1) throw Error(ErrorCode::invalid_argument, "forecast horizon must be at least 1");
  const auto n = model.sigma.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(model.sigma(j, j) > 0.0)) {
      throw Error(ErrorCode::degenerate, "residual variance of variable " + std::to_string(j) +
                                             " is not positive");
    }
  }
  const auto a = ma_coefficients(model, horizon);
  Eigen::MatrixXd numerator = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd denominator = Eigen::VectorXd::Zero(n);
  for (const auto& ah : a) {
    const Eigen::MatrixXd a_sigma = ah * model.sigma;  // (e_i' A_h Sigma e_j) = a_sigma(i, j)
    numerator += a_sigma.cwiseAbs2();
    denominator += (a_sigma * ah.transpose()).diagonal();
  }
  Eigen::MatrixXd theta(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(denominator(i) > 0.0)) {
      throw Error(ErrorCode::degenerate, "forecast error variance of variable " +
                                             std::to_string(i) + " is zero");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      theta(i, j) = numerator(i, j) / model.sigma(j, j) / denominator(i);
    }
  }
  return theta;
}

ConnectednessTable connectedness_table(const Eigen::MatrixXd& theta) {
  const auto n = theta.rows();
  if (n == 0 || theta.cols() != n) {
    throw Error(ErrorCode::invalid_argument, "GVD matrix must be square and non-empty");
  }
  if ((theta.array() < 0.0).any() || !theta.allFinite()) {
    throw Error(ErrorCode::invalid_argument, "GVD matrix must be finite and non-negative");
  }
  ConnectednessTable out;
  out.d.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double row_sum = theta.row(i).sum();
    if (!(row_sum > 0.0)) {
      throw Error(ErrorCode::degenerate, "GVD row " + std::to_string(i) + " sums to zero");
    }
    out.d.row(i) = 100.0 * theta.row(i) / row_sum;
  }
  const Eigen::VectorXd own = out.d.diagonal();
  out.from_degree = out.d.rowwise().sum() - own;
  out.to_degree = out.d.colwise().sum().transpose() - own;
  out.net_degree = out.to_degree - out.from_degree;
  out.total = out.from_degree.sum() / static_cast<double>(n);
  return out;
}

RollingConnectedness rolling_total_connectedness(const Eigen::MatrixXd& returns, int w, int p,
                                                 int horizon, unsigned threads) {
  if (w < 1 || returns.rows() < w) {
    throw Error(ErrorCode::too_short, "rolling connectedness: fewer rows than the window length");
  }
  const auto n = returns.cols();
  if (w < n * p + n + 10) {
    throw Error(ErrorCode::invalid_argument, "rolling connectedness: window too short for VAR(" +
                                                 std::to_string(p) + ")");
  }
  const auto windows = static_cast<std::size_t>(returns.rows() - w + 1);
  std::vector<std::optional<RollingEntry>> slots(windows);
  std::vector<std::optional<WindowGap>> failures(windows);
  parallel_for(windows, threads, [&](std::size_t k) {
    try {
      const auto model = fit_var(returns.middleRows(static_cast<Eigen::Index>(k), w), p);
      RollingEntry entry;
      entry.window = k;
      entry.table = connectedness_table(gvd(model, horizon));
      entry.explosive = model.explosive;
      slots[k] = std::move(entry);
    } catch (const Error& e) {
      failures[k] = WindowGap{k, e.code(), e.what()};
    }
  });
  RollingConnectedness out;
  for (std::size_t k = 0; k < windows; ++k) {
    if (slots[k]) out.entries.push_back(std::move(*slots[k]));
    if (failures[k]) out.gaps.push_back(std::move(*failures[k]));
  }
  return out;
}

}  // namespace dccanet::connectedness
