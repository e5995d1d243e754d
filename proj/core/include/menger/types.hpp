#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace menger {

using Point = Eigen::VectorXd;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr const char* kVersion = "0.1.0";

/// Thrown when an exhaustive computation would exceed the configured budget.
/// Carries the tuple count the caller would have to allow.
class budget_error : public std::runtime_error {
 public:
  budget_error(std::size_t required, std::size_t allowed)
      : std::runtime_error("exhaustive enumeration requires " + std::to_string(required) +
                           " tuples, budget allows " + std::to_string(allowed)),
        required_tuples(required),
        allowed_tuples(allowed) {}
  std::size_t required_tuples;
  std::size_t allowed_tuples;
};

/// splitmix64; used to derive independent per-chunk seeds from one user seed.
inline std::uint64_t split_mix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  return split_mix64(s);
}

}  // namespace menger
