#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dccanet::netgraph {

struct Edge {
  int i = 0;  // i < j
  int j = 0;
  double weight = 0.0;
};

struct MstResult {
  int scale = 0;
  std::vector<Edge> edges;  // in the order Prim adds them
  double tree_length = 0.0;  // mean edge weight, L = sum / (N - 1)
  Eigen::MatrixXd mst_adjacency;

  double total_weight() const;
};

/// Prim's algorithm on the complete graph whose weights are the upper triangle
/// of `weights`. Grows from node 0; among equal-weight cut edges the
/// lexicographically smallest (i, j) wins. Throws on N < 2 or a negative or
/// non-finite weight.
MstResult prim_mst(const Eigen::MatrixXd& weights, int scale = 0);

/// L(s1) / L(s2). Throws Error(degenerate) when l_long is not positive.
double dccc(double l_short, double l_long);

/// Min-max rescaling of a series onto [0, 1] over the whole sample; NaNs pass
/// through, a constant series maps to 0.
std::vector<double> rescale_unit_interval(std::span<const double> values);

struct SpectralResult {
  double lambda_max = 0.0;
  double mean_degree = 0.0;
  double max_degree = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct PowerIterationOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
};

/// Weighted degrees k_i = sum_j a_ij.
Eigen::VectorXd weighted_degrees(const Eigen::MatrixXd& a);

/// Perron root of a symmetric non-negative matrix by power iteration from the
/// all-ones vector, stopping when successive Rayleigh quotients differ by less
/// than the tolerance. Iterates on A + k_max I: the shift leaves eigenvectors
/// unchanged, makes the iteration matrix positive semi-definite (so the
/// Rayleigh quotient rises monotonically from <k>) and lets bipartite graphs
/// such as trees, whose spectra are symmetric about zero, converge.
/// Non-convergence is reported through `converged`, not thrown.
SpectralResult dominant_eigenvalue(const Eigen::MatrixXd& a, const PowerIterationOptions& options = {});

struct EdgeMoments {
  double mean = 0.0;
  double variance = 0.0;  // population
  double skewness = 0.0;
  double kurtosis = 0.0;  // raw, 0 when variance is 0
  double bandwidth = 0.0;
  std::vector<std::pair<double, double>> density;  // (abscissa, density)
};

inline constexpr std::size_t kDensityPoints = 256;

/// h = 0.9 min(sd, IQR / 1.34) n^(-1/5). Falls back to sd when the IQR is 0.
double silverman_bandwidth(std::span<const double> values);

/// Gaussian kernel density evaluated on kDensityPoints evenly spaced points over
/// [min - 3h, max + 3h], without renormalization.
std::vector<std::pair<double, double>> kernel_density(std::span<const double> values, double bandwidth);

/// Moments of the MST edge weights plus a kernel density of them, rescaled so
/// its trapezoidal integral over the grid is 1. Requires at least two edges.
EdgeMoments edge_moments(const MstResult& mst);
EdgeMoments edge_moments(std::span<const double> weights);

}  // namespace dccanet::netgraph
