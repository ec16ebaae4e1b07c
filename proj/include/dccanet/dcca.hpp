#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dccanet::dcca {

inline constexpr int kMinScale = 4;

/// How a profile of length T is covered by boxes of length s.
enum class BoxScheme {
  /// floor(T/s) non-overlapping boxes from the first point; remainder dropped.
  forward,
  /// forward boxes plus floor(T/s) boxes anchored at the last point.
  forward_backward,
};

/// Running record of ratios pulled back into [-1, 1].
struct ClampStats {
  int count = 0;
  double max_excess = 0.0;

  void merge(const ClampStats& other) {
    count += other.count;
    max_excess = std::max(max_excess, other.max_excess);
  }
};

/// X_t = sum_{i<=t} (x_i - mean(x)).
std::vector<double> integrate_profile(std::span<const double> x);

/// Residuals of the integrated profile of `x` after an OLS line (abscissa
/// 1..s) is removed from each box, boxes laid end to end. Works as a building
/// block: F^2_DCCA(x, y) = dot(res_x, res_y) / ((s - 1) * boxes).
std::vector<double> box_residuals(std::span<const double> x, int s,
                                  BoxScheme scheme = BoxScheme::forward);

int box_count(std::size_t length, int s, BoxScheme scheme = BoxScheme::forward);

/// Mean over boxes of the per-box residual covariance (denominator s - 1).
/// Signed. Requires equal lengths and T >= 2s.
double detrended_covariance(std::span<const double> x, std::span<const double> y, int s,
                            BoxScheme scheme = BoxScheme::forward);

/// F_DFA(s) = sqrt(detrended_covariance(x, x, s)).
double dfa(std::span<const double> x, int s, BoxScheme scheme = BoxScheme::forward);

/// F^2_DCCA / (F_x F_y), clamped to [-1, 1]. Throws Error(degenerate) when a
/// series is perfectly detrendable at this scale.
double rho_dcca(std::span<const double> x, std::span<const double> y, int s,
                BoxScheme scheme = BoxScheme::forward, ClampStats* clamps = nullptr);

struct DccaMatrix {
  int scale = 0;
  Eigen::MatrixXd rho;
  ClampStats clamps;
};

struct DistanceMatrix {
  int scale = 0;
  Eigen::MatrixXd d;
};

/// Pairwise rho_dcca over the columns of `returns` (T x N).
DccaMatrix dcca_matrix(const Eigen::MatrixXd& returns, int s, BoxScheme scheme = BoxScheme::forward);

/// d = sqrt(2 (1 - rho^2)), zero diagonal.
double to_distance(double rho);
DistanceMatrix to_distance(const DccaMatrix& m);

}  // namespace dccanet::dcca
