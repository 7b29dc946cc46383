#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "adm/types.hpp"

namespace adm {

using Engine = std::mt19937_64;

/// Independent engine for (seed, stream). Streams with different indices are
/// decorrelated through seed_seq mixing.
Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0);

inline constexpr double kNoiselessDb = std::numeric_limits<double>::infinity();

// Es/N0 in dB for unit-energy symbols. +inf means noiseless.
struct NoiseSpec {
  double snr_db = 20.0;
  double sigma2() const;  // per dimension, 1 / (2 gamma)
};

struct FadingSpec {
  double avg_snr_db = 20.0;
  int coherence_len = 2;
};

struct FadedStream {
  SymbolStream samples;
  std::vector<double> block_snr;  // linear, |h|^2 * gamma_bar per block
};

/// sigma^2 per dimension for a linear SNR (0 for infinite SNR).
double sigma2_from_snr(double gamma);

/// Circularly symmetric complex Gaussian with variance sigma2 per dimension.
inline ComplexSample complex_gaussian(Engine& eng, double sigma2) {
  if (sigma2 <= 0.0) return {0.0, 0.0};
  std::normal_distribution<double> n(0.0, std::sqrt(sigma2));
  const double re = n(eng);
  return {re, n(eng)};
}

SymbolStream apply_awgn(const SymbolStream& stream, const NoiseSpec& spec, std::uint64_t seed);

FadedStream apply_rayleigh_block(const SymbolStream& stream, const FadingSpec& spec,
                                 std::uint64_t seed);

}  // namespace adm
