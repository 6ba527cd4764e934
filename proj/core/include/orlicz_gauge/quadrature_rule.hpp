#pragma once

#include <array>
#include <cstddef>

namespace orlicz {

/// Nested 30-point Gauss / 61-point Kronrod pair on [-1, 1]. The Gauss
/// nodes are a subset of the Kronrod nodes, so one sweep of 61 samples
/// yields both estimates.
struct KronrodRule {
  static constexpr std::size_t kPoints = 61;

  std::array<double, kPoints> nodes{};
  std::array<double, kPoints> kronrod_weights{};
  std::array<double, kPoints> gauss_weights{};  // zero off the Gauss subset

  static const KronrodRule& g30k61();
};

}  // namespace orlicz
