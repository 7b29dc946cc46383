#include "adm/types.hpp"

#include <stdexcept>
#include <string>

namespace adm {

std::string_view to_string(Scheme s) { return s == Scheme::Dpsk ? "dpsk" : "dapsk"; }

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Exact: return "exact";
    case Variant::Rule: return "rule";
    case Variant::Simple: return "simple";
  }
  return "?";
}

Scheme parse_scheme(std::string_view s) {
  if (s == "dpsk") return Scheme::Dpsk;
  if (s == "dapsk") return Scheme::Dapsk;
  throw std::invalid_argument("unknown scheme '" + std::string(s) + "'");
}

Variant parse_variant(std::string_view s) {
  if (s == "exact") return Variant::Exact;
  if (s == "rule") return Variant::Rule;
  if (s == "simple") return Variant::Simple;
  throw std::invalid_argument("unknown variant '" + std::string(s) + "'");
}

BitVerdict verdict_from_ranking(const BitRanking& ranking, int beta) {
  if (beta < 0 || beta > 4) throw std::invalid_argument("beta must be in 0..4");
  BitVerdict v;
  for (int r = 0; r < beta; ++r) {
    const auto bit = static_cast<std::size_t>(ranking.order[static_cast<std::size_t>(r)]);
    v.slots[bit] = ranking.hard[bit];
  }
  return v;
}

}  // namespace adm
