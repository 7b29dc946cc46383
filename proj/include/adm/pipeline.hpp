#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "adm/analysis.hpp"
#include "adm/types.hpp"

namespace adm {

enum class ChannelKind { Awgn, Rayleigh };

struct E2eConfig {
  Scheme scheme = Scheme::Dpsk;
  Variant variant = Variant::Rule;
  double ring_ratio = 2.0;
  ChannelKind channel = ChannelKind::Rayleigh;
  double snr_db = 15.0;  // average SNR for Rayleigh, fixed SNR for AWGN
  int coherence_len = 2;
  double target_ber = 1e-4;
  int fixed_beta = 0;  // 0 selects beta per block from the operating regions
  std::uint32_t k = 1000;
  double lt_c = 0.1;
  double lt_delta = 0.5;
  double epsilon = 0.3;
  std::uint64_t max_pairs = 1000000;
  std::uint64_t seed = 1;
};

struct TranscriptRow {
  std::uint64_t pair_index;
  double instantaneous_snr;  // linear
  int beta_used;
  int bits_decided;
  std::uint64_t buffer_fill;
};

enum class Outcome { Success, Failure, Timeout };
const char* to_string(Outcome o);

struct Transcript {
  std::vector<TranscriptRow> rows;
  std::uint64_t pairs = 0;
  std::uint64_t symbols = 0;
  std::uint64_t encoded_bits_sent = 0;
  std::uint64_t bits_decided = 0;
  std::uint64_t bits_erased = 0;
  std::uint64_t decided_errors = 0;  // decided bits that differ from the encoded bit
  Outcome outcome = Outcome::Timeout;
  std::optional<double> message_ber;  // after a successful decode
  double bits_per_pair() const { return pairs ? double(bits_decided) / double(pairs) : 0.0; }
  double bits_per_symbol() const { return symbols ? double(bits_decided) / double(symbols) : 0.0; }
};

/// Each fading block of coherence_len symbols starts with its own reference
/// symbol, so it carries coherence_len - 1 differential pairs.
Transcript end_to_end_run(const E2eConfig& cfg);
Transcript end_to_end_run(const E2eConfig& cfg, const OperatingRegions& regions);

void write_transcript_csv(std::ostream& os, const Transcript& t);
void write_transcript_jsonl(std::ostream& os, const Transcript& t);

}  // namespace adm
