#include "dccanet/dcca.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "dccanet/error.hpp"

namespace dccanet::dcca {

namespace {

void check_scale(std::size_t length, int s) {
  if (s < kMinScale) {
    throw Error(ErrorCode::invalid_argument,
                "box length " + std::to_string(s) + " is below the minimum of 4");
  }
  if (length < 2 * static_cast<std::size_t>(s)) {
    throw Error(ErrorCode::too_short, "series of length " + std::to_string(length) +
                                          " is shorter than two boxes of length " +
                                          std::to_string(s));
  }
}

// Detrends box [first, first + s) of `profile` and appends the residuals.
void detrend_box(const std::vector<double>& profile, std::size_t first, int s,
                 std::vector<double>& out) {
  const double n = static_cast<double>(s);
  const double x_mean = (n + 1.0) / 2.0;
  const double sxx = n * (n * n - 1.0) / 12.0;
  double y_mean = 0.0;
  for (int k = 0; k < s; ++k) y_mean += profile[first + static_cast<std::size_t>(k)];
  y_mean /= n;
  double sxy = 0.0;
  for (int k = 0; k < s; ++k) {
    sxy += (k + 1.0 - x_mean) * (profile[first + static_cast<std::size_t>(k)] - y_mean);
  }
  const double slope = sxy / sxx;
  for (int k = 0; k < s; ++k) {
    out.push_back(profile[first + static_cast<std::size_t>(k)] - y_mean -
                  slope * (k + 1.0 - x_mean));
  }
}

struct Detrended {
  std::vector<double> residuals;
  double variance = 0.0;  // F^2_DFA
  double profile_energy = 0.0;
};

double residual_product(const std::vector<double>& a, const std::vector<double>& b, int s) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  const double boxes = static_cast<double>(a.size() / static_cast<std::size_t>(s));
  return acc / ((s - 1.0) * boxes);
}

std::vector<double> residuals_of_profile(const std::vector<double>& profile, int s,
                                         BoxScheme scheme) {
  const auto step = static_cast<std::size_t>(s);
  const std::size_t boxes = profile.size() / step;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(box_count(profile.size(), s, scheme)) * step);
  for (std::size_t b = 0; b < boxes; ++b) detrend_box(profile, b * step, s, out);
  if (scheme == BoxScheme::forward_backward) {
    for (std::size_t b = 0; b < boxes; ++b) {
      detrend_box(profile, profile.size() - (b + 1) * step, s, out);
    }
  }
  return out;
}

Detrended detrend(std::span<const double> x, int s, BoxScheme scheme) {
  check_scale(x.size(), s);
  Detrended out;
  const auto profile = integrate_profile(x);
  out.residuals = residuals_of_profile(profile, s, scheme);
  out.variance = residual_product(out.residuals, out.residuals, s);
  for (double v : profile) out.profile_energy += v * v;
  out.profile_energy /= static_cast<double>(profile.size());
  return out;
}

bool is_degenerate(const Detrended& d) {
  // Residuals at rounding level relative to the profile itself.
  return !(d.variance > 1e-20 * d.profile_energy) || !(d.variance > 0.0);
}

double clamp_ratio(double ratio, ClampStats* clamps) {
  if (ratio > 1.0 || ratio < -1.0) {
    if (clamps) {
      ++clamps->count;
      clamps->max_excess = std::max(clamps->max_excess, std::abs(ratio) - 1.0);
    }
    return ratio > 0.0 ? 1.0 : -1.0;
  }
  return ratio;
}

double ratio_of(double covariance, double var_x, double var_y) {
  return covariance / (std::sqrt(var_x) * std::sqrt(var_y));
}

}  // namespace

std::vector<double> integrate_profile(std::span<const double> x) {
  if (x.size() < 2) throw Error(ErrorCode::too_short, "profile needs at least two points");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  std::vector<double> out(x.size());
  double running = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    running += x[t] - mean;
    out[t] = running;
  }
  return out;
}

int box_count(std::size_t length, int s, BoxScheme scheme) {
  const auto forward = static_cast<int>(length / static_cast<std::size_t>(s));
  return scheme == BoxScheme::forward ? forward : 2 * forward;
}

std::vector<double> box_residuals(std::span<const double> x, int s, BoxScheme scheme) {
  check_scale(x.size(), s);
  return residuals_of_profile(integrate_profile(x), s, scheme);
}

double detrended_covariance(std::span<const double> x, std::span<const double> y, int s,
                            BoxScheme scheme) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::invalid_argument, "detrended covariance: length mismatch");
  }
  return residual_product(box_residuals(x, s, scheme), box_residuals(y, s, scheme), s);
}

double dfa(std::span<const double> x, int s, BoxScheme scheme) {
  return std::sqrt(std::max(0.0, detrended_covariance(x, x, s, scheme)));
}

double rho_dcca(std::span<const double> x, std::span<const double> y, int s, BoxScheme scheme,
                ClampStats* clamps) {
  if (x.size() != y.size()) throw Error(ErrorCode::invalid_argument, "rho_dcca: length mismatch");
  const auto dx = detrend(x, s, scheme);
  const auto dy = detrend(y, s, scheme);
  if (is_degenerate(dx) || is_degenerate(dy)) {
    throw Error(ErrorCode::degenerate,
                "zero detrended fluctuation at scale " + std::to_string(s));
  }
  const double covariance = residual_product(dx.residuals, dy.residuals, s);
  return clamp_ratio(ratio_of(covariance, dx.variance, dy.variance), clamps);
}

DccaMatrix dcca_matrix(const Eigen::MatrixXd& returns, int s, BoxScheme scheme) {
  const auto n = static_cast<std::size_t>(returns.cols());
  const auto length = static_cast<std::size_t>(returns.rows());
  std::vector<Detrended> columns;
  columns.reserve(n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::span<const double> col(returns.col(static_cast<Eigen::Index>(c)).data(), length);
    columns.push_back(detrend(col, s, scheme));
    if (is_degenerate(columns.back())) {
      throw Error(ErrorCode::degenerate, "column " + std::to_string(c) +
                                             " has zero detrended fluctuation at scale " +
                                             std::to_string(s));
    }
  }

  DccaMatrix out;
  out.scale = s;
  out.rho = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double covariance = residual_product(columns[i].residuals, columns[j].residuals, s);
      const double r =
          clamp_ratio(ratio_of(covariance, columns[i].variance, columns[j].variance), &out.clamps);
      out.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r;
      out.rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = r;
    }
  }
  return out;
}

double to_distance(double rho) { return std::sqrt(std::max(0.0, 2.0 * (1.0 - rho * rho))); }

DistanceMatrix to_distance(const DccaMatrix& m) {
  DistanceMatrix out;
  out.scale = m.scale;
  out.d = m.rho.unaryExpr([](double r) { return to_distance(r); });
  out.d.diagonal().setZero();
  return out;
}

}  // namespace dccanet::dcca
