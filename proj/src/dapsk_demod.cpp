#include "adm/dapsk_demod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adm/channel.hpp"
#include "adm/special.hpp"

namespace adm::dapsk {

namespace {

void check_ratio(double R) {
  if (!(R > 1.0) || !std::isfinite(R)) throw std::invalid_argument("ring ratio must be > 1");
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

Observation observe(ComplexSample prev, ComplexSample curr, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  Observation o;
  o.prev = prev;
  o.curr = curr;
  o.sigma2 = sigma2;
  o.r = std::abs(curr) / std::abs(prev);
  o.psi = wrap_angle(std::arg(curr) - std::arg(prev));
  o.r_prime = o.r > 1.0 ? 1.0 / o.r : o.r;
  return o;
}

Observation from_statistics(double r, double psi, double sigma2) {
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  return observe({1.0, 0.0}, std::polar(r, psi), sigma2);
}

std::array<LabeledHypothesis, 32> hypotheses(const DapskMapping& mapping) {
  const double A1 = mapping.inner(), A2 = mapping.outer(), R = mapping.ring_ratio();
  struct Amp {
    double d, a;
    Bit b0;
  };
  const std::array<Amp, 4> amps = {{{A1, 1.0, 0}, {A2, 1.0, 0}, {A1, R, 1}, {A2, 1.0 / R, 1}}};
  std::array<LabeledHypothesis, 32> out{};
  std::size_t n = 0;
  for (const Amp& a : amps) {
    for (int m = 0; m < 8; ++m) {
      out[n].h = {a.d, a.a, m * kPi / 4.0};
      out[n].bits = {a.b0, mapping.phase_bit(m, 1), mapping.phase_bit(m, 2),
                     mapping.phase_bit(m, 3)};
      ++n;
    }
  }
  return out;
}

double log_joint_density(double r, double psi, const Hypothesis& h, double sigma2,
                         const DapskMapping& mapping) {
  const double A1 = mapping.inner(), A2 = mapping.outer(), R = mapping.ring_ratio();
  const bool ok = (close(h.d_mag, A1) && (close(h.alpha_mag, 1.0) || close(h.alpha_mag, R))) ||
                  (close(h.d_mag, A2) && (close(h.alpha_mag, 1.0) || close(h.alpha_mag, 1.0 / R)));
  if (!ok) throw std::invalid_argument("hypothesis amplitude pair not allowed");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  if (!(r > 0.0)) return -std::numeric_limits<double>::infinity();

  // The closed form is written in the complex noise variance.
  const double v = 2.0 * sigma2;
  const double a = h.alpha_mag;
  const double dn = h.d_mag / v;
  const double xi2 = dn * dn * (1.0 + a * a * r * r + 2.0 * a * r * std::cos(psi - h.alpha_arg));
  const double B = (1.0 + r * r) / v;
  // xi2 / B - P, rearranged to avoid cancellation at high SNR.
  const double t = psi - h.alpha_arg;
  const double dre = r * std::cos(t) - a, dim = r * std::sin(t);
  const double expo = -h.d_mag * h.d_mag / v * (dre * dre + dim * dim) / (1.0 + r * r);
  return expo - std::log(v * v * kPi * B * B * B) + std::log(xi2 + B) + std::log(r);
}

double joint_density(double r, double psi, const Hypothesis& h, double sigma2,
                     const DapskMapping& mapping) {
  return std::exp(log_joint_density(r, psi, h, sigma2, mapping));
}

std::array<double, 4> exact_bit_llrs(const Observation& obs, const DapskMapping& mapping) {
  const auto hyps = hypotheses(mapping);
  std::array<double, 32> ll{};
  for (std::size_t n = 0; n < 32; ++n)
    ll[n] = log_joint_density(obs.r, obs.psi, hyps[n].h, obs.sigma2, mapping);

  std::array<double, 4> llr{};
  std::array<double, 16> zero{}, one{};
  for (std::size_t i = 0; i < 4; ++i) {
    std::size_t nz = 0, no = 0;
    for (std::size_t n = 0; n < 32; ++n) {
      if (hyps[n].bits[i] == 0) zero[nz++] = ll[n];
      else one[no++] = ll[n];
    }
    llr[i] = log_sum_exp(zero) - log_sum_exp(one);
  }
  return llr;
}

double delta0_estimate(double ring_ratio) {
  check_ratio(ring_ratio);
  return 2.0 / (1.0 + ring_ratio);
}

double delta0_numeric(double ring_ratio, double snr_db) {
  const DapskMapping mapping = build_dapsk_mapping(ring_ratio);
  const double s2 = sigma2_from_snr(db_to_linear(snr_db));
  auto f = [&](double r) { return exact_bit_llrs(from_statistics(r, 0.0, s2), mapping)[0]; };
  double lo = 1.0 / ring_ratio, hi = 1.0;
  double flo = f(lo), fhi = f(hi);
  if (flo * fhi > 0.0) throw std::runtime_error("b0 LLR does not change sign on (1/R, 1)");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ThresholdSet threshold_set(int beta, double R) {
  check_ratio(R);
  if (beta < 1 || beta > 3) throw std::invalid_argument("threshold sets exist for beta 1..3");
  const double q = R * R - 1.0;
  auto f1 = [&](double a, double b) { return std::min(1.0, 2.0 * (R - std::cos(a - b)) / q); };
  auto f2 = [&](double a, double b) { return std::max(0.0, 2.0 * (R * std::cos(a - b) - 1.0) / q); };
  const double p = kPi;
  ThresholdSet ts;
  ts.beta = beta;
  ts.ring_ratio = R;
  ts.delta0 = delta0_estimate(R);
  switch (beta) {
    case 3:
      ts.delta = {f1(p / 32, p / 4), f1(3 * p / 32, p / 4), f2(3 * p / 32, p / 4),
                  f2(p / 32, p / 4)};
      break;
    case 2:
      ts.delta = {f1(3 * p / 32, -p / 4), f1(p / 32, -p / 4), f2(p / 32, -p / 4),
                  f2(3 * p / 32, -p / 4)};
      break;
    default:
      ts.delta = {f1(3 * p / 8, -p / 4), f1(3 * p / 16, -p / 4), f2(3 * p / 16, -p / 4),
                  f2(3 * p / 8, -p / 4)};
      break;
  }
  return ts;
}

Band classify(double r_prime, const ThresholdSet& ts) {
  if (r_prime > ts.delta[0]) return Band::ReliableHigh;
  if (r_prime > ts.delta[1]) return Band::HybridHigh;
  if (r_prime > ts.delta[2]) return Band::Unreliable;
  if (r_prime > ts.delta[3]) return Band::HybridLow;
  return Band::ReliableLow;
}

PhaseRanking rank_phase_bits(double psi, const DapskMapping& mapping) {
  const auto& lab = mapping.labeling();
  const auto d = lab.flip_distances(psi);
  const auto order = order_by_distance(d);
  const int m = lab.nearest(psi);
  PhaseRanking pr;
  for (std::size_t j = 0; j < 3; ++j) {
    pr.order[j] = order[j] + 1;
    pr.dist[j] = d[static_cast<std::size_t>(order[j])];
    pr.hard[j] = lab.bit(m, static_cast<int>(j));
  }
  return pr;
}

namespace {

BitRanking assemble(const PhaseRanking& pr, int b0_position, Bit b0) {
  BitRanking r;
  std::size_t out = 0;
  for (int j = 0; j < 3; ++j) {
    if (j == b0_position) r.order[out++] = 0;
    r.order[out++] = pr.order[static_cast<std::size_t>(j)];
  }
  if (b0_position >= 3) r.order[out++] = 0;
  r.hard = {b0, pr.hard[0], pr.hard[1], pr.hard[2]};
  return r;
}

Bit hard_b0(double r_prime, double delta0) { return r_prime <= delta0 ? 1 : 0; }

}  // namespace

BitRanking rank_bits_optimal(const Observation& obs, const DapskMapping& mapping) {
  const double R = mapping.ring_ratio();
  const double q = R * R - 1.0;
  const double d0 = mapping.amplitude_threshold();
  const double rp = obs.r_prime;
  const PhaseRanking pr = rank_phase_bits(obs.psi, mapping);

  // Number of phase bits that are more reliable than b0.
  int ahead = 0;
  for (std::size_t j = 0; j < 3; ++j) {
    const double c = std::cos(pr.dist[j]);
    bool b0_wins;
    if (rp > d0) b0_wins = rp > 2.0 * (R - c) / q;
    else if (rp < d0) b0_wins = !(rp > 2.0 * (R * c - 1.0) / q);
    else b0_wins = false;
    if (!b0_wins) ++ahead;
  }
  return assemble(pr, ahead, hard_b0(rp, d0));
}

BitRanking rank_bits_exact(const Observation& obs, const DapskMapping& mapping) {
  const auto llr = exact_bit_llrs(obs, mapping);
  std::array<double, 4> mag{};
  BitRanking r;
  for (std::size_t i = 0; i < 4; ++i) {
    mag[i] = std::abs(llr[i]);
    r.hard[i] = llr[i] < 0.0 ? 1 : 0;
  }
  r.order = order_by_distance(mag);
  return r;
}

BitVerdict optimal_rule_demod(const Observation& obs, int beta, const DapskMapping& mapping) {
  if (beta < 1 || beta > 4) throw std::invalid_argument("beta must be in 1..4");
  return verdict_from_ranking(rank_bits_optimal(obs, mapping), beta);
}

BitVerdict exact_demod(const Observation& obs, int beta, const DapskMapping& mapping) {
  if (beta < 1 || beta > 4) throw std::invalid_argument("beta must be in 1..4");
  return verdict_from_ranking(rank_bits_exact(obs, mapping), beta);
}

BitVerdict simple_demod_beta(const Observation& obs, int beta, const ThresholdSet& ts,
                             const DapskMapping& mapping) {
  if (beta < 1 || beta > 3) throw std::invalid_argument("beta must be in 1..3");
  const PhaseRanking pr = rank_phase_bits(obs.psi, mapping);
  bool keep_b0;
  switch (classify(obs.r_prime, ts)) {
    case Band::ReliableHigh:
    case Band::ReliableLow: keep_b0 = true; break;
    case Band::Unreliable: keep_b0 = false; break;
    default:
      keep_b0 = !(pr.dist[static_cast<std::size_t>(beta - 1)] >
                  kHybridMargin[static_cast<std::size_t>(beta)]);
      break;
  }
  const BitRanking r = assemble(pr, keep_b0 ? 0 : 3, hard_b0(obs.r_prime, ts.delta0));
  return verdict_from_ranking(r, beta);
}

BitVerdict demod_beta(const Observation& obs, int beta, const DapskMapping& mapping,
                      Variant variant) {
  switch (variant) {
    case Variant::Exact: return exact_demod(obs, beta, mapping);
    case Variant::Rule: return optimal_rule_demod(obs, beta, mapping);
    case Variant::Simple:
      if (beta == 4) return optimal_rule_demod(obs, beta, mapping);
      return simple_demod_beta(obs, beta, threshold_set(beta, mapping.ring_ratio()), mapping);
  }
  throw std::invalid_argument("unknown variant");
}

}  // namespace adm::dapsk
