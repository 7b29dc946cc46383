#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "adm/types.hpp"

namespace adm::lt {

struct DegreeDistribution {
  std::uint32_t k = 0;
  double c = 0.0;
  double delta = 0.0;
  std::vector<double> pmf;  // pmf[d - 1] = Pr(degree = d)
  std::vector<double> cdf;
  std::uint32_t spike = 0;  // degree carrying the robust spike
};

DegreeDistribution robust_soliton(std::uint32_t k, double c, double delta);

struct EncodedBit {
  std::uint64_t index = 0;
  Bit value = 0;
  std::vector<std::uint32_t> neighbors;
};

/// Neighbour set of encoded bit `index`, regenerated from (seed, index).
std::vector<std::uint32_t> neighbors(std::uint64_t index, std::uint64_t seed,
                                     const DegreeDistribution& dist);

class Encoder {
 public:
  Encoder(std::vector<Bit> message, std::uint64_t seed, DegreeDistribution dist);
  EncodedBit encode(std::uint64_t index) const;
  Bit value(std::uint64_t index) const { return encode(index).value; }
  const DegreeDistribution& distribution() const { return dist_; }

 private:
  std::vector<Bit> message_;
  std::uint64_t seed_;
  DegreeDistribution dist_;
};

std::vector<EncodedBit> lt_encode(std::span<const Bit> message, std::size_t count,
                                  std::uint64_t seed, const DegreeDistribution& dist,
                                  std::uint64_t first_index = 0);

using Received = std::pair<std::uint64_t, Bit>;  // (sequence index, value)

/// Peeling decoder. Returns nullopt when no degree-one bit remains before all
/// k message bits are known. Throws on duplicate indices.
std::optional<std::vector<Bit>> peel_decode(std::span<const Received> received, std::uint32_t k,
                                            std::uint64_t seed, const DegreeDistribution& dist);

}  // namespace adm::lt
