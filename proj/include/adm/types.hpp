#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace adm {

using Bit = std::uint8_t;
using ComplexSample = std::complex<double>;
using SymbolStream = std::vector<ComplexSample>;

inline constexpr double kPi = 3.14159265358979323846;

enum class Scheme { Dpsk, Dapsk };

// exact: rank bits by exact LLR magnitude
// rule:  high-SNR decision rules (DPSK angular rule, DAPSK optimal rule)
// simple: DAPSK banded scheme with transition sectors (DPSK treats it as rule)
enum class Variant { Exact, Rule, Simple };

std::string_view to_string(Scheme s);
std::string_view to_string(Variant v);
Scheme parse_scheme(std::string_view s);
Variant parse_variant(std::string_view s);

// Output of a beta-decision scheme for one symbol pair: each of the four bit
// slots (b0..b3) is either decided or erased.
struct BitVerdict {
  std::array<std::optional<Bit>, 4> slots{};

  int beta() const {
    int n = 0;
    for (const auto& s : slots) n += s.has_value() ? 1 : 0;
    return n;
  }
  bool erased(int i) const { return !slots[static_cast<std::size_t>(i)].has_value(); }
};

// Reliability ordering of the four bits of a pair, most reliable first, along
// with the hard decision at the nearest hypothesis.
struct BitRanking {
  std::array<int, 4> order{};
  std::array<Bit, 4> hard{};
};

// Keep the first `beta` entries of the ranking, erase the rest.
BitVerdict verdict_from_ranking(const BitRanking& ranking, int beta);

}  // namespace adm
