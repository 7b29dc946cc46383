#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "adm/types.hpp"

namespace adm {

// A cyclic Gray labelling of N equally spaced differential angles
// (angle m = m * 2pi/N). Labels are packed MSB-first: for a 4-bit label the
// value 0b1000 has b0 = 1.
template <int N, int Bits>
class CyclicLabeling {
 public:
  static constexpr int kSize = N;
  static constexpr int kBits = Bits;
  static constexpr double kStep = 2.0 * kPi / N;

  constexpr explicit CyclicLabeling(const std::array<std::uint8_t, N>& labels);

  std::uint8_t label(int m) const { return labels_[static_cast<std::size_t>(mod(m))]; }
  Bit bit(int m, int i) const { return static_cast<Bit>((label(m) >> (Bits - 1 - i)) & 1U); }
  int index_of(std::uint8_t label) const { return index_[label]; }
  static double angle(int m);
  /// Index of the angle closest to `phi` (ties resolve upward).
  static int nearest(double phi);
  /// Smallest positive offset d such that bit i of label(m + d) differs from
  /// bit i of label(m).
  int flip_up(int m, int i) const { return up_[idx(m, i)]; }
  int flip_down(int m, int i) const { return down_[idx(m, i)]; }

  /// For each bit, the angular distance from `phi` to the nearest angle whose
  /// bit value differs from the nearest label's. Larger means more reliable.
  std::array<double, Bits> flip_distances(double phi) const;

  static constexpr int mod(int m) { return ((m % N) + N) % N; }

 private:
  static constexpr std::size_t idx(int m, int i) {
    return static_cast<std::size_t>(mod(m) * Bits + i);
  }
  std::array<std::uint8_t, N> labels_{};
  std::array<int, 1 << Bits> index_{};
  std::array<int, N * Bits> up_{};
  std::array<int, N * Bits> down_{};
};

// 16-DPSK: four bits b0b1b2b3 per differential phase m * pi/8.
class DpskMapping {
 public:
  using Labeling = CyclicLabeling<16, 4>;
  explicit DpskMapping(const Labeling& labeling) : labeling_(labeling) {}
  const Labeling& labeling() const { return labeling_; }
  Bit bit(int m, int i) const { return labeling_.bit(m, i); }

 private:
  Labeling labeling_;
};

// 16-DAPSK: b0 is carried by the ring transition (1 = ring change), b1b2b3 by
// the differential phase m * pi/4. Rings A1 < A2 = R * A1 with unit average
// energy.
class DapskMapping {
 public:
  using Labeling = CyclicLabeling<8, 3>;
  DapskMapping(const Labeling& labeling, double ring_ratio);

  const Labeling& labeling() const { return labeling_; }
  double ring_ratio() const { return ring_ratio_; }
  double inner() const { return inner_; }
  double outer() const { return outer_; }
  /// Phase bit b_i, i in {1,2,3}, of the label at angle index m.
  Bit phase_bit(int m, int i) const { return labeling_.bit(m, i - 1); }
  /// Ring-change detection threshold on r' = min(r, 1/r).
  double amplitude_threshold() const { return 2.0 / (1.0 + ring_ratio_); }

 private:
  Labeling labeling_;
  double ring_ratio_;
  double inner_;
  double outer_;
};

DpskMapping build_dpsk_mapping();
DapskMapping build_dapsk_mapping(double ring_ratio);

SymbolStream dpsk_encode(std::span<const Bit> bits, const DpskMapping& mapping);
SymbolStream dapsk_encode(std::span<const Bit> bits, const DapskMapping& mapping);

// Hard differential detection of a whole stream (all four bits per pair).
std::vector<Bit> dpsk_decode(std::span<const ComplexSample> stream, const DpskMapping& mapping);
std::vector<Bit> dapsk_decode(std::span<const ComplexSample> stream, const DapskMapping& mapping);

/// CSV with columns angle_index,b0,b1,b2,b3.
void write_mapping_csv(std::ostream& os, const DpskMapping& mapping);
/// CSV with columns angle_index,b0,b1,b2,b3; one row per (ring change, angle).
void write_mapping_csv(std::ostream& os, const DapskMapping& mapping);

// ---------------------------------------------------------------------------

template <int N, int Bits>
constexpr CyclicLabeling<N, Bits>::CyclicLabeling(const std::array<std::uint8_t, N>& labels)
    : labels_(labels) {
  index_.fill(-1);
  for (int m = 0; m < N; ++m) index_[labels_[static_cast<std::size_t>(m)]] = m;
  for (int m = 0; m < N; ++m) {
    for (int i = 0; i < Bits; ++i) {
      int d = 1;
      while (d < N && bit(m + d, i) == bit(m, i)) ++d;
      up_[idx(m, i)] = d;
      d = 1;
      while (d < N && bit(m - d, i) == bit(m, i)) ++d;
      down_[idx(m, i)] = d;
    }
  }
}

template <int N, int Bits>
double CyclicLabeling<N, Bits>::angle(int m) {
  const int w = mod(m);
  return (w > N / 2 ? w - N : w) * kStep;
}

template <int N, int Bits>
int CyclicLabeling<N, Bits>::nearest(double phi) {
  return mod(static_cast<int>(std::floor(phi / kStep + 0.5)));
}

template <int N, int Bits>
std::array<double, Bits> CyclicLabeling<N, Bits>::flip_distances(double phi) const {
  const int m = nearest(phi);
  std::array<double, Bits> d{};
  for (int i = 0; i < Bits; ++i) {
    const double a = std::abs(std::remainder(phi - (m + up_[idx(m, i)]) * kStep, 2.0 * kPi));
    const double b = std::abs(std::remainder(phi - (m - down_[idx(m, i)]) * kStep, 2.0 * kPi));
    d[static_cast<std::size_t>(i)] = std::min(a, b);
  }
  return d;
}

/// Orders indices by decreasing distance; near-ties (within 1e-12) keep the
/// lower index first.
template <std::size_t K>
std::array<int, K> order_by_distance(const std::array<double, K>& dist) {
  std::array<int, K> order{};
  for (std::size_t i = 0; i < K; ++i) order[i] = static_cast<int>(i);
  for (std::size_t i = 1; i < K; ++i) {
    for (std::size_t j = i; j > 0; --j) {
      const auto a = static_cast<std::size_t>(order[j - 1]);
      const auto b = static_cast<std::size_t>(order[j]);
      if (dist[b] > dist[a] + 1e-12) std::swap(order[j - 1], order[j]);
      else break;
    }
  }
  return order;
}

}  // namespace adm
