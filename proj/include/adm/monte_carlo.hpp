#pragma once

#include <cstdint>
#include <vector>

#include "adm/types.hpp"

namespace adm {

// Pairs per RNG chunk. Chunk c always draws from engine (seed, c), so any
// partition of chunks across threads gives the same counts.
inline constexpr std::uint64_t kChunkPairs = 1 << 15;

struct McSpec {
  Scheme scheme = Scheme::Dpsk;
  Variant variant = Variant::Rule;
  std::vector<int> betas = {4};  // all evaluated on the same draws
  double snr_db = 10.0;
  double ring_ratio = 2.0;
  std::uint64_t trials = 100000;  // symbol pairs
  std::uint64_t seed = 1;
};

struct McCount {
  int beta = 4;
  std::uint64_t pairs = 0;
  std::uint64_t decided = 0;
  std::uint64_t errors = 0;
  double ber() const { return decided ? static_cast<double>(errors) / decided : 0.0; }
  /// 95% normal-approximation half-width.
  double ci() const;
};

std::vector<McCount> monte_carlo_serial(const McSpec& spec);
/// OpenMP over chunks; bit-identical to the serial reference. workers <= 0
/// uses the OpenMP default.
std::vector<McCount> monte_carlo_parallel(const McSpec& spec, int workers);

struct McBer {
  double ber;
  double ci;
};
McBer monte_carlo_ber(Scheme scheme, Variant variant, int beta, double gamma, double ring_ratio,
                      std::uint64_t trials, std::uint64_t seed, int workers = 0);

}  // namespace adm
