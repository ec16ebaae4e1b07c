#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace dccanet {

template <std::size_t Dim>
SimplexResult<Dim> nelder_mead(const std::function<double(const std::array<double, Dim>&)>& f,
                               const std::array<double, Dim>& start,
                               const SimplexOptions& options) {
  using Point = std::array<double, Dim>;
  constexpr std::size_t kVertices = Dim + 1;

  const auto eval = [&](const Point& p) {
    const double v = f(p);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::array<Point, kVertices> vertex{};
  std::array<double, kVertices> value{};
  vertex[0] = start;
  value[0] = eval(start);
  for (std::size_t k = 0; k < Dim; ++k) {
    vertex[k + 1] = start;
    vertex[k + 1][k] += options.initial_step;
    value[k + 1] = eval(vertex[k + 1]);
  }

  std::array<std::size_t, kVertices> order{};
  const auto sort_vertices = [&] {
    for (std::size_t k = 0; k < kVertices; ++k) order[k] = k;
    // stable on ties so the starting vertex stays preferred
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
  };
  const auto diameter = [&] {
    const Point& best = vertex[order[0]];
    double worst = 0.0;
    for (std::size_t k = 1; k < kVertices; ++k) {
      double sq = 0.0;
      for (std::size_t d = 0; d < Dim; ++d) {
        const double diff = vertex[order[k]][d] - best[d];
        sq += diff * diff;
      }
      worst = std::max(worst, std::sqrt(sq));
    }
    return worst;
  };

  SimplexResult<Dim> result;
  sort_vertices();
  int iteration = 0;
  bool converged = false;
  while (true) {
    if (diameter() < options.diameter_tolerance) {
      converged = true;
      break;
    }
    if (iteration >= options.max_iterations) break;
    ++iteration;

    const std::size_t best = order[0];
    const std::size_t worst = order[Dim];
    const std::size_t second_worst = order[Dim - 1];

    Point centroid{};
    for (std::size_t k = 0; k < Dim; ++k) {
      for (std::size_t d = 0; d < Dim; ++d) centroid[d] += vertex[order[k]][d];
    }
    for (double& c : centroid) c /= static_cast<double>(Dim);

    const auto along = [&](double coefficient) {
      Point p{};
      for (std::size_t d = 0; d < Dim; ++d) {
        p[d] = centroid[d] + coefficient * (vertex[worst][d] - centroid[d]);
      }
      return p;
    };

    const Point reflected = along(-1.0);
    const double f_reflected = eval(reflected);
    if (f_reflected < value[best]) {
      const Point expanded = along(-2.0);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        vertex[worst] = expanded;
        value[worst] = f_expanded;
      } else {
        vertex[worst] = reflected;
        value[worst] = f_reflected;
      }
    } else if (f_reflected < value[second_worst]) {
      vertex[worst] = reflected;
      value[worst] = f_reflected;
    } else {
      const bool outside = f_reflected < value[worst];
      const Point contracted = along(outside ? -0.5 : 0.5);
      const double f_contracted = eval(contracted);
      if (f_contracted < (outside ? f_reflected : value[worst])) {
        vertex[worst] = contracted;
        value[worst] = f_contracted;
      } else {
        for (std::size_t k = 1; k < kVertices; ++k) {
          const std::size_t v = order[k];
          for (std::size_t d = 0; d < Dim; ++d) {
            vertex[v][d] = vertex[best][d] + 0.5 * (vertex[v][d] - vertex[best][d]);
          }
          value[v] = eval(vertex[v]);
        }
      }
    }
    sort_vertices();
  }

  result.x = vertex[order[0]];
  result.value = value[order[0]];
  result.iterations = iteration;
  result.converged = converged;
  return result;
}

}  // namespace dccanet
