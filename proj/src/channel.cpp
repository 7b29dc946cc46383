#include "adm/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "adm/special.hpp"

namespace adm {

Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9U};
  return Engine(seq);
}

double sigma2_from_snr(double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("SNR must be positive");
  if (std::isinf(gamma)) return 0.0;
  return 1.0 / (2.0 * gamma);
}

double NoiseSpec::sigma2() const { return sigma2_from_snr(db_to_linear(snr_db)); }

SymbolStream apply_awgn(const SymbolStream& stream, const NoiseSpec& spec, std::uint64_t seed) {
  const double s2 = spec.sigma2();
  Engine eng = make_engine(seed);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const ComplexSample rot = std::polar(1.0, u(eng));
  SymbolStream out(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) out[i] = stream[i] * rot + complex_gaussian(eng, s2);
  return out;
}

FadedStream apply_rayleigh_block(const SymbolStream& stream, const FadingSpec& spec,
                                 std::uint64_t seed) {
  if (spec.coherence_len < 2) throw std::invalid_argument("coherence_len must be >= 2");
  const double gbar = db_to_linear(spec.avg_snr_db);
  const double s2 = sigma2_from_snr(gbar);
  const auto len = static_cast<std::size_t>(spec.coherence_len);
  Engine eng = make_engine(seed);
  FadedStream out;
  out.samples.resize(stream.size());
  out.block_snr.reserve((stream.size() + len - 1) / len);
  ComplexSample h;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (i % len == 0) {
      h = complex_gaussian(eng, 0.5);
      out.block_snr.push_back(std::norm(h) * gbar);
    }
    out.samples[i] = stream[i] * h + complex_gaussian(eng, s2);
  }
  return out;
}

}  // namespace adm
