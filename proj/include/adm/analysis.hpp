#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "adm/constellation.hpp"
#include "adm/types.hpp"

namespace adm {

/// Closed-form tail Pr(phase offset > pi/M) of the phase-difference noise
/// between two noisy unit vectors. Requires M >= 3.
double pawula_tail(int M, double gamma);
/// Same closed form at an arbitrary angle in (0, pi/2).
double pawula_tail_angle(double angle, double gamma);
/// Exact one-sided tail at an angle in [0, pi], by 1-D quadrature.
double phase_tail_exact(double angle, double gamma);
/// Closed form up to pi/3, exact beyond.
double phase_tail(double angle, double gamma);

/// Offset intervals (relative to the transmitted angle, within (-pi, pi]) on
/// which the rule-based beta-DS decides at least one bit wrongly, for the
/// transmitted phase index `tx`.
std::vector<std::pair<double, double>> dpsk_error_intervals(int beta, int tx,
                                                            const DpskMapping& mapping);

/// Probability that a beta-DS decides any bit wrongly, averaged over the 16
/// transmitted labels.
double dpsk_symbol_error(int beta, double gamma);
double dpsk_ber(int beta, double gamma);

struct QuadratureBer {
  double ber = 0.0;
  double abs_error = 0.0;   // summed quadrature error estimate on the BER
  double total_mass = 0.0;  // integrated probability over all regions (~1)
};

/// BER among decided bits of the simplified 16-DAPSK scheme (standard
/// detection for beta = 4), by region-wise 2-D quadrature of the joint
/// density. Throws std::runtime_error if the achieved error exceeds both
/// `rel_tol` relative to the BER and an absolute floor of 1e-14.
QuadratureBer dapsk_ber_quadrature(int beta, double gamma, double ring_ratio,
                                   double rel_tol = 1e-4);
double dapsk_ber_numeric(int beta, double gamma, double ring_ratio);

double analytic_ber(Scheme scheme, int beta, double gamma, double ring_ratio);

struct OperatingRegions {
  Scheme scheme = Scheme::Dpsk;
  double ring_ratio = 2.0;
  double target_ber = 1e-4;
  std::array<double, 4> crossing{};   // gamma_beta with BER_beta = target (linear, inf if none)
  std::array<double, 4> threshold{};  // min over beta' >= beta of crossing
  std::array<bool, 4> attainable{};

  /// 0 below threshold[0], else the largest beta whose threshold is reached.
  int beta_for(double gamma) const;
};

OperatingRegions operating_regions(Scheme scheme, double ring_ratio, double target_ber,
                                   double lo_db = -10.0, double hi_db = 60.0);

/// Expected decided bits per symbol pair under Rayleigh fading (exponential
/// instantaneous SNR with mean avg_snr).
double spectral_efficiency(const OperatingRegions& regions, double avg_snr_db);
double spectral_efficiency(Scheme scheme, double ring_ratio, double target_ber,
                           double avg_snr_db);

struct Crossover {
  bool found = false;
  double avg_snr_db = 0.0;
  double se = 0.0;
};

/// First average SNR (scanning upward) at which `b` overtakes `a`.
Crossover se_crossover(const OperatingRegions& a, const OperatingRegions& b, double lo_db,
                       double hi_db, double step_db = 0.5);

struct RingRatioRow {
  int beta;
  double ring_ratio;
  double snr_db;
  double ber;
};

std::vector<RingRatioRow> ring_ratio_study(const std::vector<int>& betas,
                                           const std::vector<double>& snr_db,
                                           const std::vector<double>& ring_ratios);

struct BerPoint {
  double snr_db = 0.0;
  double ber = 0.0;
  double ci = 0.0;           // 95% half-width, 0 for analytic points
  std::uint64_t trials = 0;  // symbol pairs, 0 for analytic points
};

struct BerCurve {
  Scheme scheme = Scheme::Dpsk;
  Variant variant = Variant::Rule;
  int beta = 4;
  double ring_ratio = 0.0;  // DAPSK only
  std::string method;       // "analytic" or "monte_carlo"
  std::vector<BerPoint> points;
};

}  // namespace adm
