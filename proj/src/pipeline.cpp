#include "adm/pipeline.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "adm/channel.hpp"
#include "adm/constellation.hpp"
#include "adm/dapsk_demod.hpp"
#include "adm/dpsk_demod.hpp"
#include "adm/rateless.hpp"
#include "adm/special.hpp"

namespace adm {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::Failure: return "failure";
    case Outcome::Timeout: return "timeout";
  }
  return "?";
}

namespace {

constexpr std::uint64_t kMessageStream = 0x6d657373616765ULL;
constexpr std::uint64_t kChannelStream = 0x6368616e6e656cULL;

void validate(const E2eConfig& c) {
  if (c.coherence_len < 2) throw std::invalid_argument("coherence_len must be >= 2");
  if (c.fixed_beta < 0 || c.fixed_beta > 4) throw std::invalid_argument("beta must be in 0..4");
  if (!(c.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  if (c.max_pairs < 1) throw std::invalid_argument("max_pairs must be >= 1");
  if (c.scheme == Scheme::Dapsk) build_dapsk_mapping(c.ring_ratio);
}

}  // namespace

Transcript end_to_end_run(const E2eConfig& cfg) {
  validate(cfg);
  if (cfg.fixed_beta > 0) return end_to_end_run(cfg, OperatingRegions{});
  return end_to_end_run(cfg, operating_regions(cfg.scheme, cfg.ring_ratio, cfg.target_ber));
}

Transcript end_to_end_run(const E2eConfig& cfg, const OperatingRegions& regions) {
  validate(cfg);
  const auto dist = lt::robust_soliton(cfg.k, cfg.lt_c, cfg.lt_delta);

  std::vector<Bit> message(cfg.k);
  {
    Engine eng = make_engine(cfg.seed, kMessageStream);
    std::uniform_int_distribution<int> bit(0, 1);
    for (auto& b : message) b = static_cast<Bit>(bit(eng));
  }
  const lt::Encoder encoder(message, cfg.seed, dist);

  const DpskMapping dpsk_map = build_dpsk_mapping();
  const DapskMapping dapsk_map =
      build_dapsk_mapping(cfg.scheme == Scheme::Dapsk ? cfg.ring_ratio : 2.0);
  std::vector<dapsk::ThresholdSet> ts;
  for (int b = 1; b <= 3; ++b) ts.push_back(dapsk::threshold_set(b, dapsk_map.ring_ratio()));

  const auto needed = static_cast<std::size_t>(std::ceil((1.0 + cfg.epsilon) * cfg.k));
  const auto pairs_per_block = static_cast<std::size_t>(cfg.coherence_len - 1);

  Transcript t;
  std::vector<lt::Received> buffer;
  buffer.reserve(needed + 4);
  std::uint64_t next_index = 0;

  for (std::uint64_t block = 0; t.pairs < cfg.max_pairs; ++block) {
    std::vector<Bit> bits;
    std::vector<std::uint64_t> idx;
    for (std::size_t p = 0; p < pairs_per_block * 4; ++p) {
      idx.push_back(next_index);
      bits.push_back(encoder.value(next_index++));
    }
    const SymbolStream tx = cfg.scheme == Scheme::Dpsk ? dpsk_encode(bits, dpsk_map)
                                                       : dapsk_encode(bits, dapsk_map);
    const std::uint64_t block_seed = make_engine(cfg.seed ^ kChannelStream, block)();
    SymbolStream rx;
    double gamma;
    if (cfg.channel == ChannelKind::Rayleigh) {
      auto faded = apply_rayleigh_block(tx, {cfg.snr_db, cfg.coherence_len}, block_seed);
      rx = std::move(faded.samples);
      gamma = faded.block_snr.front();
    } else {
      rx = apply_awgn(tx, {cfg.snr_db}, block_seed);
      gamma = db_to_linear(cfg.snr_db);
    }
    const int beta = cfg.fixed_beta > 0 ? cfg.fixed_beta : regions.beta_for(gamma);
    const double obs_s2 = std::isinf(gamma) || gamma <= 0.0 ? 1e-12 : std::max(1e-12, sigma2_from_snr(gamma));
    t.symbols += rx.size();

    for (std::size_t p = 0; p < pairs_per_block && t.pairs < cfg.max_pairs; ++p) {
      BitVerdict v;
      if (beta > 0) {
        if (cfg.scheme == Scheme::Dpsk) {
          v = dpsk::demod_beta(dpsk::observe(rx[p], rx[p + 1], obs_s2), beta, dpsk_map, cfg.variant);
        } else {
          const auto obs = dapsk::observe(rx[p], rx[p + 1], obs_s2);
          if (cfg.variant == Variant::Simple && beta < 4)
            v = dapsk::simple_demod_beta(obs, beta, ts[static_cast<std::size_t>(beta - 1)], dapsk_map);
          else
            v = dapsk::demod_beta(obs, beta, dapsk_map, cfg.variant);
        }
      }
      int decided = 0;
      for (std::size_t i = 0; i < 4; ++i) {
        const std::size_t j = 4 * p + i;
        ++t.encoded_bits_sent;
        if (!v.slots[i].has_value()) {
          ++t.bits_erased;
          continue;
        }
        ++decided;
        if (*v.slots[i] != bits[j]) ++t.decided_errors;
        buffer.emplace_back(idx[j], *v.slots[i]);
      }
      t.bits_decided += static_cast<std::uint64_t>(decided);
      t.rows.push_back({t.pairs, gamma, beta, decided, buffer.size()});
      ++t.pairs;

      if (buffer.size() >= needed) {
        const auto decoded = lt::peel_decode(buffer, cfg.k, cfg.seed, dist);
        if (decoded) {
          t.outcome = Outcome::Success;
          std::uint64_t wrong = 0;
          for (std::size_t i = 0; i < message.size(); ++i) wrong += (*decoded)[i] != message[i];
          t.message_ber = static_cast<double>(wrong) / static_cast<double>(cfg.k);
        } else {
          t.outcome = Outcome::Failure;
        }
        return t;
      }
    }
  }
  t.outcome = Outcome::Timeout;
  return t;
}

void write_transcript_csv(std::ostream& os, const Transcript& t) {
  os << "pair_index,instantaneous_snr,beta_used,bits_decided,buffer_fill\n";
  for (const auto& r : t.rows)
    os << r.pair_index << ',' << r.instantaneous_snr << ',' << r.beta_used << ','
       << r.bits_decided << ',' << r.buffer_fill << '\n';
}

void write_transcript_jsonl(std::ostream& os, const Transcript& t) {
  for (const auto& r : t.rows) {
    nlohmann::json j = {{"pair_index", r.pair_index},
                        {"instantaneous_snr", std::isinf(r.instantaneous_snr) ? nlohmann::json(nullptr)
                                                                              : nlohmann::json(r.instantaneous_snr)},
                        {"beta_used", r.beta_used},
                        {"bits_decided", r.bits_decided},
                        {"buffer_fill", r.buffer_fill}};
    os << j.dump() << '\n';
  }
}

}  // namespace adm
