#include "adm/dpsk_demod.hpp"

#include <cmath>
#include <stdexcept>

#include "adm/special.hpp"

namespace adm::dpsk {

Observation observe(ComplexSample prev, ComplexSample curr, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  return {prev, curr, sigma2, wrap_angle(std::arg(curr) - std::arg(prev))};
}

double log_pair_likelihood(const Observation& obs, double delta_phi) {
  const double s2 = obs.sigma2;
  const double arg = std::abs(obs.curr + obs.prev * std::polar(1.0, delta_phi)) / s2;
  return -(2.0 + std::norm(obs.curr) + std::norm(obs.prev)) / (2.0 * s2) -
         2.0 * std::log(2.0 * kPi * s2) + log_bessel_i0(arg);
}

double pair_likelihood(const Observation& obs, double delta_phi) {
  return std::exp(log_pair_likelihood(obs, delta_phi));
}

std::array<double, 4> exact_bit_llrs(const Observation& obs, const DpskMapping& mapping) {
  const auto& lab = mapping.labeling();
  // The Gaussian prefactor is common to every hypothesis and cancels.
  std::array<double, 16> ll{};
  for (int m = 0; m < 16; ++m)
    ll[static_cast<std::size_t>(m)] =
        log_bessel_i0(std::abs(obs.curr + obs.prev * std::polar(1.0, lab.angle(m))) / obs.sigma2);

  std::array<double, 4> llr{};
  std::array<double, 8> zero{}, one{};
  for (int i = 0; i < 4; ++i) {
    std::size_t nz = 0, no = 0;
    for (int m = 0; m < 16; ++m) {
      if (lab.bit(m, i) == 0) zero[nz++] = ll[static_cast<std::size_t>(m)];
      else one[no++] = ll[static_cast<std::size_t>(m)];
    }
    llr[static_cast<std::size_t>(i)] = log_sum_exp(zero) - log_sum_exp(one);
  }
  return llr;
}

BitRanking rank_bits_high_snr(double phi, const DpskMapping& mapping) {
  const auto& lab = mapping.labeling();
  const int m = lab.nearest(phi);
  BitRanking r;
  r.order = order_by_distance(lab.flip_distances(phi));
  for (int i = 0; i < 4; ++i) r.hard[static_cast<std::size_t>(i)] = lab.bit(m, i);
  return r;
}

BitRanking rank_bits_exact(const Observation& obs, const DpskMapping& mapping) {
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

BitVerdict demod_beta(const Observation& obs, int beta, const DpskMapping& mapping,
                      Variant variant) {
  if (beta < 1 || beta > 4) throw std::invalid_argument("beta must be in 1..4");
  const BitRanking r = variant == Variant::Exact ? rank_bits_exact(obs, mapping)
                                                 : rank_bits_high_snr(obs.phi, mapping);
  return verdict_from_ranking(r, beta);
}

}  // namespace adm::dpsk
