#pragma once

#include <array>
#include <functional>

namespace dccanet {

template <std::size_t Dim>
struct SimplexResult {
  std::array<double, Dim> x{};
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SimplexOptions {
  double diameter_tolerance = 1e-8;
  int max_iterations = 2000;
  double initial_step = 0.5;
};

/// Minimizes `f` with the Nelder-Mead downhill simplex (standard coefficients:
/// reflection 1, expansion 2, contraction 1/2, shrink 1/2). Converges when the
/// largest vertex distance from the best vertex drops below the tolerance.
/// Non-finite objective values are treated as +inf. The returned point is never
/// worse than `start`.
template <std::size_t Dim>
SimplexResult<Dim> nelder_mead(const std::function<double(const std::array<double, Dim>&)>& f,
                               const std::array<double, Dim>& start,
                               const SimplexOptions& options = {});

}  // namespace dccanet

#include "dccanet/nelder_mead_impl.hpp"
