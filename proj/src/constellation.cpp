#include "adm/constellation.hpp"

#include <ostream>
#include <stdexcept>

namespace adm {

namespace {

// b0b1b2b3 at m * pi/8. Transition bits cycle 0,3,2,3,1,3,2,3.
constexpr std::array<std::uint8_t, 16> kDpskLabels = {
    0b0000, 0b1000, 0b1001, 0b1011, 0b1010, 0b1110, 0b1111, 0b1101,
    0b1100, 0b0100, 0b0101, 0b0111, 0b0110, 0b0010, 0b0011, 0b0001,
};

// b1b2b3 at m * pi/4.
constexpr std::array<std::uint8_t, 8> kDapskPhaseLabels = {
    0b000, 0b001, 0b101, 0b100, 0b110, 0b111, 0b011, 0b010,
};

std::uint8_t pack(std::span<const Bit> group) {
  std::uint8_t v = 0;
  for (Bit b : group) {
    if (b > 1) throw std::invalid_argument("bit values must be 0 or 1");
    v = static_cast<std::uint8_t>((v << 1) | b);
  }
  return v;
}

void check_groups(std::size_t n) {
  if (n % 4 != 0) throw std::invalid_argument("bit count must be a multiple of 4");
}

void unpack(std::uint8_t v, int nbits, std::vector<Bit>& out) {
  for (int i = nbits - 1; i >= 0; --i) out.push_back(static_cast<Bit>((v >> i) & 1U));
}

}  // namespace

DapskMapping::DapskMapping(const Labeling& labeling, double ring_ratio)
    : labeling_(labeling), ring_ratio_(ring_ratio) {
  if (!(ring_ratio > 1.0) || !std::isfinite(ring_ratio))
    throw std::invalid_argument("ring ratio must be > 1");
  inner_ = std::sqrt(2.0 / (1.0 + ring_ratio * ring_ratio));
  outer_ = ring_ratio * inner_;
}

DpskMapping build_dpsk_mapping() { return DpskMapping(DpskMapping::Labeling(kDpskLabels)); }

DapskMapping build_dapsk_mapping(double ring_ratio) {
  return DapskMapping(DapskMapping::Labeling(kDapskPhaseLabels), ring_ratio);
}

SymbolStream dpsk_encode(std::span<const Bit> bits, const DpskMapping& mapping) {
  check_groups(bits.size());
  const auto& lab = mapping.labeling();
  SymbolStream out;
  out.reserve(bits.size() / 4 + 1);
  out.emplace_back(1.0, 0.0);
  int phase = 0;
  for (std::size_t g = 0; g < bits.size(); g += 4) {
    phase = lab.mod(phase + lab.index_of(pack(bits.subspan(g, 4))));
    out.push_back(std::polar(1.0, phase * lab.kStep));
  }
  return out;
}

SymbolStream dapsk_encode(std::span<const Bit> bits, const DapskMapping& mapping) {
  check_groups(bits.size());
  const auto& lab = mapping.labeling();
  SymbolStream out;
  out.reserve(bits.size() / 4 + 1);
  out.emplace_back(mapping.inner(), 0.0);
  bool outer = false;
  int phase = 0;
  for (std::size_t g = 0; g < bits.size(); g += 4) {
    if (pack(bits.subspan(g, 1)) == 1) outer = !outer;
    phase = lab.mod(phase + lab.index_of(pack(bits.subspan(g + 1, 3))));
    out.push_back(std::polar(outer ? mapping.outer() : mapping.inner(), phase * lab.kStep));
  }
  return out;
}

std::vector<Bit> dpsk_decode(std::span<const ComplexSample> stream, const DpskMapping& mapping) {
  std::vector<Bit> bits;
  if (stream.size() < 2) return bits;
  bits.reserve(4 * (stream.size() - 1));
  for (std::size_t k = 1; k < stream.size(); ++k) {
    const double phi = std::arg(stream[k] * std::conj(stream[k - 1]));
    unpack(mapping.labeling().label(mapping.labeling().nearest(phi)), 4, bits);
  }
  return bits;
}

std::vector<Bit> dapsk_decode(std::span<const ComplexSample> stream, const DapskMapping& mapping) {
  std::vector<Bit> bits;
  if (stream.size() < 2) return bits;
  bits.reserve(4 * (stream.size() - 1));
  for (std::size_t k = 1; k < stream.size(); ++k) {
    const double r = std::abs(stream[k]) / std::abs(stream[k - 1]);
    const double rp = std::min(r, 1.0 / r);
    bits.push_back(rp <= mapping.amplitude_threshold() ? 1 : 0);
    const double psi = std::arg(stream[k] * std::conj(stream[k - 1]));
    unpack(mapping.labeling().label(mapping.labeling().nearest(psi)), 3, bits);
  }
  return bits;
}

void write_mapping_csv(std::ostream& os, const DpskMapping& mapping) {
  os << "angle_index,b0,b1,b2,b3\n";
  for (int m = 0; m < 16; ++m) {
    os << m;
    for (int i = 0; i < 4; ++i) os << ',' << int(mapping.bit(m, i));
    os << '\n';
  }
}

void write_mapping_csv(std::ostream& os, const DapskMapping& mapping) {
  os << "angle_index,b0,b1,b2,b3\n";
  for (int b0 = 0; b0 < 2; ++b0) {
    for (int m = 0; m < 8; ++m) {
      os << m << ',' << b0;
      for (int i = 1; i <= 3; ++i) os << ',' << int(mapping.phase_bit(m, i));
      os << '\n';
    }
  }
}

}  // namespace adm
