#pragma once

#include <array>

#include "adm/constellation.hpp"
#include "adm/types.hpp"

namespace adm::dapsk {

struct Observation {
  ComplexSample prev;
  ComplexSample curr;
  double sigma2 = 0.0;
  double r = 1.0;        // |curr| / |prev|
  double psi = 0.0;      // arg(curr) - arg(prev) in (-pi, pi]
  double r_prime = 1.0;  // min(r, 1/r)
};

Observation observe(ComplexSample prev, ComplexSample curr, double sigma2);
/// Observation with prev = 1 and curr = r e^{j psi}.
Observation from_statistics(double r, double psi, double sigma2);

// Transmitted (|d_{k-1}|, |alpha_k|, arg alpha_k).
struct Hypothesis {
  double d_mag;
  double alpha_mag;
  double alpha_arg;
};

/// The 32 equally likely hypotheses with their bits b0..b3.
struct LabeledHypothesis {
  Hypothesis h;
  std::array<Bit, 4> bits;
};
std::array<LabeledHypothesis, 32> hypotheses(const DapskMapping& mapping);

/// Joint density of (r, psi). Throws for (|d|, |alpha|) pairs that cannot
/// occur with the mapping's rings.
double log_joint_density(double r, double psi, const Hypothesis& h, double sigma2,
                         const DapskMapping& mapping);
double joint_density(double r, double psi, const Hypothesis& h, double sigma2,
                     const DapskMapping& mapping);

std::array<double, 4> exact_bit_llrs(const Observation& obs, const DapskMapping& mapping);

double delta0_estimate(double ring_ratio);
/// r' in (1/R, 1) at which ln Lambda_b0 vanishes for psi = 0.
double delta0_numeric(double ring_ratio, double snr_db);

struct ThresholdSet {
  int beta = 3;
  std::array<double, 4> delta{};  // Delta_{beta,1..4}
  double delta0 = 0.0;
  double ring_ratio = 2.0;
};

ThresholdSet threshold_set(int beta, double ring_ratio);

// In the transition bands b0 is dropped when the beta-th ranked phase bit lies
// farther than this from its flip angle. Each value is the midpoint of the two
// phase offsets that define the inner threshold pair of the same beta.
inline constexpr std::array<double, 4> kHybridMargin = {
    0.0, 17.0 * kPi / 32.0, 5.0 * kPi / 16.0, 3.0 * kPi / 16.0};

enum class Band { ReliableHigh, HybridHigh, Unreliable, HybridLow, ReliableLow };

/// Band of r' in (0, 1]; a value equal to a threshold falls in the lower band.
Band classify(double r_prime, const ThresholdSet& ts);

/// Phase bits (1..3) ordered by decreasing distance to their flip angles, the
/// distances in that order, and the hard values of b1..b3 by position.
struct PhaseRanking {
  std::array<int, 3> order{};
  std::array<double, 3> dist{};
  std::array<Bit, 3> hard{};
};
PhaseRanking rank_phase_bits(double psi, const DapskMapping& mapping);

BitRanking rank_bits_optimal(const Observation& obs, const DapskMapping& mapping);
BitRanking rank_bits_exact(const Observation& obs, const DapskMapping& mapping);

BitVerdict optimal_rule_demod(const Observation& obs, int beta, const DapskMapping& mapping);
BitVerdict exact_demod(const Observation& obs, int beta, const DapskMapping& mapping);
BitVerdict simple_demod_beta(const Observation& obs, int beta, const ThresholdSet& ts,
                             const DapskMapping& mapping);

/// Dispatch on variant. The simple variant at beta = 4 is standard detection.
BitVerdict demod_beta(const Observation& obs, int beta, const DapskMapping& mapping,
                      Variant variant);

}  // namespace adm::dapsk
