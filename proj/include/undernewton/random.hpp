#pragma once

// Deterministic random streams for generated problems.
//
// Uniforms come from std::mt19937_64, whose output sequence is fixed by the
// C++ standard for a given 64-bit seed. Standard normals use the Box-Muller
// transform on two 53-bit uniforms, returning the cosine branch first and the
// sine branch on the next call. Streams are bit-identical wherever std::log,
// std::sqrt, std::cos and std::sin agree, which holds for glibc on x86-64.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

#include "undernewton/linalg.hpp"

namespace undernewton {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
  }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  VectorXd normal_vector(Index n) {
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  /// Filled row by row.
  MatrixXd normal_matrix(Index rows, Index cols) {
    MatrixXd a(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) a(i, j) = normal();
    }
    return a;
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace undernewton
