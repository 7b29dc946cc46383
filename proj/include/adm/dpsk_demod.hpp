#pragma once

#include <array>

#include "adm/constellation.hpp"
#include "adm/types.hpp"

namespace adm::dpsk {

struct Observation {
  ComplexSample prev;
  ComplexSample curr;
  double sigma2 = 0.0;
  double phi = 0.0;  // arg(curr) - arg(prev) in (-pi, pi]
};

Observation observe(ComplexSample prev, ComplexSample curr, double sigma2);

/// log Pr(y_k, y_{k-1} | delta_phi) for unit-energy symbols.
double log_pair_likelihood(const Observation& obs, double delta_phi);
double pair_likelihood(const Observation& obs, double delta_phi);

/// ln Pr(.|b_i = 0) - ln Pr(.|b_i = 1), equiprobable phase differences.
std::array<double, 4> exact_bit_llrs(const Observation& obs, const DpskMapping& mapping);

/// Angular rule: hard bits of the nearest label, bits ordered by distance to
/// their nearest flip angle (descending; ties to the lower index).
BitRanking rank_bits_high_snr(double phi, const DpskMapping& mapping);
BitRanking rank_bits_exact(const Observation& obs, const DpskMapping& mapping);

/// Variant::Simple is the same as Variant::Rule for DPSK.
BitVerdict demod_beta(const Observation& obs, int beta, const DpskMapping& mapping,
                      Variant variant);

}  // namespace adm::dpsk
