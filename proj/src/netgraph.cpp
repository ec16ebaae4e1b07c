#include "dccanet/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

#include "dccanet/error.hpp"

namespace dccanet::netgraph {

double MstResult::total_weight() const {
  double total = 0.0;
  for (const auto& e : edges) total += e.weight;
  return total;
}

MstResult prim_mst(const Eigen::MatrixXd& weights, int scale) {
  const auto n = static_cast<int>(weights.rows());
  if (n < 2 || weights.cols() != weights.rows()) {
    throw Error(ErrorCode::invalid_argument, "MST needs a square matrix with N >= 2");
  }
  const auto weight = [&](int a, int b) { return weights(std::min(a, b), std::max(a, b)); };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = weight(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw Error(ErrorCode::invalid_argument, "MST weight (" + std::to_string(i) + ", " +
                                                     std::to_string(j) +
                                                     ") is negative or not finite");
      }
    }
  }

  // Candidate key for attaching node v through tree node u: (weight, i, j).
  using Key = std::tuple<double, int, int>;
  const auto key = [&](int u, int v) { return Key{weight(u, v), std::min(u, v), std::max(u, v)}; };

  std::vector<bool> in_tree(static_cast<std::size_t>(n), false);
  std::vector<Key> best(static_cast<std::size_t>(n));
  in_tree[0] = true;
  for (int v = 1; v < n; ++v) best[static_cast<std::size_t>(v)] = key(0, v);

  MstResult out;
  out.scale = scale;
  out.mst_adjacency = Eigen::MatrixXd::Zero(n, n);
  for (int added = 1; added < n; ++added) {
    int next = -1;
    for (int v = 0; v < n; ++v) {
      if (in_tree[static_cast<std::size_t>(v)]) continue;
      if (next < 0 || best[static_cast<std::size_t>(v)] < best[static_cast<std::size_t>(next)]) {
        next = v;
      }
    }
    const auto [w, i, j] = best[static_cast<std::size_t>(next)];
    out.edges.push_back({i, j, w});
    out.mst_adjacency(i, j) = w;
    out.mst_adjacency(j, i) = w;
    in_tree[static_cast<std::size_t>(next)] = true;
    for (int v = 0; v < n; ++v) {
      if (in_tree[static_cast<std::size_t>(v)]) continue;
      const Key candidate = key(next, v);
      if (candidate < best[static_cast<std::size_t>(v)]) best[static_cast<std::size_t>(v)] = candidate;
    }
  }
  out.tree_length = out.total_weight() / static_cast<double>(n - 1);
  return out;
}

double dccc(double l_short, double l_long) {
  if (!(l_long > 0.0)) {
    throw Error(ErrorCode::degenerate, "DCCC denominator (long-scale tree length) is not positive");
  }
  return l_short / l_long;
}

std::vector<double> rescale_unit_interval(std::span<const double> values) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    if (std::isnan(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<double> out(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::isnan(values[k])) {
      out[k] = values[k];
    } else {
      out[k] = hi > lo ? (values[k] - lo) / (hi - lo) : 0.0;
    }
  }
  return out;
}

Eigen::VectorXd weighted_degrees(const Eigen::MatrixXd& a) { return a.rowwise().sum(); }

SpectralResult dominant_eigenvalue(const Eigen::MatrixXd& a, const PowerIterationOptions& options) {
  const auto n = a.rows();
  if (n == 0 || a.cols() != n) {
    throw Error(ErrorCode::invalid_argument, "eigenvalue target must be a non-empty square matrix");
  }
  if ((a.array() < 0.0).any() || !a.allFinite()) {
    throw Error(ErrorCode::invalid_argument, "eigenvalue target must be finite and non-negative");
  }
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::invalid_argument, "eigenvalue target must be symmetric");
  }
  if (a.isZero(0.0)) throw Error(ErrorCode::degenerate, "eigenvalue target is all zero");

  const Eigen::VectorXd degrees = weighted_degrees(a);
  SpectralResult out;
  out.mean_degree = degrees.mean();
  out.max_degree = degrees.maxCoeff();

  const double shift = out.max_degree;
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n).normalized();
  Eigen::VectorXd ax = a * x;
  double previous = x.dot(ax);
  for (int it = 1; it <= options.max_iterations; ++it) {
    x = ax + shift * x;
    x.normalize();
    ax = a * x;
    const double rayleigh = x.dot(ax);
    out.iterations = it;
    out.lambda_max = rayleigh;
    if (std::abs(rayleigh - previous) < options.tolerance) {
      out.converged = true;
      break;
    }
    previous = rayleigh;
  }
  return out;
}

namespace {

// Linear-interpolation quantile of sorted data (R type 7).
double quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double silverman_bandwidth(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  if (!(sd > 0.0)) {
    // all weights equal: a narrow bump at the common value
    return 1e-3 * (mean != 0.0 ? std::abs(mean) : 1.0);
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(n, -0.2);
}

std::vector<std::pair<double, double>> kernel_density(std::span<const double> values,
                                                      double bandwidth) {
  if (values.empty() || !(bandwidth > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "kernel density needs data and a positive bandwidth");
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it - 3.0 * bandwidth;
  const double hi = *hi_it + 3.0 * bandwidth;
  const double step = (hi - lo) / static_cast<double>(kDensityPoints - 1);
  const double norm =
      1.0 / (static_cast<double>(values.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  std::vector<std::pair<double, double>> out(kDensityPoints);
  for (std::size_t k = 0; k < kDensityPoints; ++k) {
    const double x = k + 1 == kDensityPoints ? hi : lo + step * static_cast<double>(k);
    double sum = 0.0;
    for (double v : values) {
      const double z = (x - v) / bandwidth;
      sum += std::exp(-0.5 * z * z);
    }
    out[k] = {x, sum * norm};
  }
  return out;
}

EdgeMoments edge_moments(std::span<const double> weights) {
  if (weights.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "edge moments need at least two edges (N >= 3)");
  }
  const auto n = static_cast<double>(weights.size());
  EdgeMoments out;
  for (double w : weights) out.mean += w;
  out.mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double w : weights) {
    const double d = w - out.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const auto [lo, hi] = std::minmax_element(weights.begin(), weights.end());
  if (*lo == *hi) {
    out.mean = *lo;
    m2 = 0.0;
  }
  out.variance = m2;
  if (m2 > 0.0) {
    out.skewness = m3 / std::pow(m2, 1.5);
    out.kurtosis = m4 / (m2 * m2);
  }

  out.bandwidth = silverman_bandwidth(weights);
  out.density = kernel_density(weights, out.bandwidth);
  double mass = 0.0;
  for (std::size_t k = 1; k < out.density.size(); ++k) {
    mass += 0.5 * (out.density[k].second + out.density[k - 1].second) *
            (out.density[k].first - out.density[k - 1].first);
  }
  for (auto& [x, f] : out.density) f /= mass;
  return out;
}

EdgeMoments edge_moments(const MstResult& mst) {
  std::vector<double> weights;
  weights.reserve(mst.edges.size());
  for (const auto& e : mst.edges) weights.push_back(e.weight);
  return edge_moments(weights);
}

}  // namespace dccanet::netgraph
