#include "adm/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <tuple>

#include "adm/analysis.hpp"
#include "adm/constellation.hpp"
#include "adm/dapsk_demod.hpp"
#include "adm/monte_carlo.hpp"
#include "adm/pipeline.hpp"
#include "adm/special.hpp"

namespace adm {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <class F>
auto as_config_error(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<Scheme> schemes(const Config& cfg) {
  std::vector<Scheme> out;
  for (const auto& s : cfg.get_list("scheme")) out.push_back(as_config_error([&] { return parse_scheme(s); }));
  return out;
}

std::vector<Variant> variants(const Config& cfg) {
  std::vector<Variant> out;
  for (const auto& s : cfg.get_list("variant")) out.push_back(as_config_error([&] { return parse_variant(s); }));
  return out;
}

std::vector<double> ring_ratios(const Config& cfg) {
  auto rs = cfg.get_double_list("ring_ratio");
  for (double r : rs)
    if (!(r > 1.0) || !std::isfinite(r)) throw ConfigError("ring_ratio values must be > 1");
  return rs;
}

std::vector<int> betas(const Config& cfg) {
  auto bs = cfg.get_int_list("betas");
  for (int b : bs)
    if (b < 1 || b > 4) throw ConfigError("betas must be in 1..4");
  return bs;
}

double target(const Config& cfg) {
  const double t = cfg.get_double("target_ber");
  if (!(t > 0.0 && t < 0.5)) throw ConfigError("target_ber must be in (0, 0.5)");
  return t;
}

Scheme single_scheme(const Config& cfg) {
  const auto s = schemes(cfg);
  if (s.size() != 1) throw ConfigError("this command takes a single scheme");
  return s.front();
}

bool has_analytic(Scheme s, Variant v) {
  return s == Scheme::Dpsk ? v != Variant::Exact : v == Variant::Simple;
}

std::uint64_t point_seed(std::uint64_t seed, Scheme s, double R, double snr_db) {
  std::string key = std::to_string(seed) + '|' + std::string(to_string(s)) + '|' + num(R) + '|' + num(snr_db);
  return fnv1a64(key);
}

}  // namespace

CommandResult cmd_ber(const Config& cfg) {
  const auto sch = schemes(cfg);
  const auto var = variants(cfg);
  const auto bs = betas(cfg);
  const auto grid = cfg.snr_grid();
  const std::string method = cfg.get("method");
  if (method != "analytic" && method != "monte_carlo" && method != "both")
    throw ConfigError("method must be analytic, monte_carlo or both");
  const bool analytic = method != "monte_carlo", mc = method != "analytic";
  const std::uint64_t trials = cfg.get_uint("trials");
  const std::uint64_t seed = cfg.get_uint("seed");
  const int workers = static_cast<int>(cfg.get_int("workers"));
  if (mc && trials < 1) throw ConfigError("monte_carlo needs trials >= 1");
  const auto rs = std::find(sch.begin(), sch.end(), Scheme::Dapsk) != sch.end()
                      ? ring_ratios(cfg)
                      : std::vector<double>{};
  if (method == "analytic")
    for (Scheme s : sch)
      for (Variant v : var)
        if (!has_analytic(s, v))
          throw ConfigError("no analytic model for " + std::string(to_string(s)) + "/" +
                            std::string(to_string(v)));

  struct Row {
    Scheme scheme;
    Variant variant;
    std::string method;
    int beta;
    double R;
    double snr_db;
    double ber;
    double ci;
    std::uint64_t trials;
  };
  std::vector<Row> rows;
  const double nan = std::nan("");
  for (Scheme s : sch) {
    const std::vector<double> Rs = s == Scheme::Dapsk ? rs : std::vector<double>{nan};
    for (Variant v : var) {
      for (double R : Rs) {
        if (analytic && has_analytic(s, v))
          for (int b : bs)
            for (double db : grid)
              rows.push_back({s, v, "analytic", b, R, db, analytic_ber(s, b, db_to_linear(db), R), nan, 0});
        if (mc) {
          for (double db : grid) {
            McSpec spec;
            spec.scheme = s;
            spec.variant = v;
            spec.betas = bs;
            spec.snr_db = db;
            spec.ring_ratio = s == Scheme::Dapsk ? R : 2.0;
            spec.trials = trials;
            spec.seed = point_seed(seed, s, R, db);
            for (const McCount& c : monte_carlo_parallel(spec, workers))
              rows.push_back({s, v, "monte_carlo", c.beta, R, db, c.ber(), c.ci(), c.pairs});
          }
        }
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.scheme, a.variant, a.method, a.beta) < std::tie(b.scheme, b.variant, b.method, b.beta);
  });

  std::ostringstream os;
  os << csv_hash_line(cfg, "ber") << "scheme,variant,beta,R,snr_db,ber,ci,method,trials\n";
  for (const Row& r : rows)
    os << to_string(r.scheme) << ',' << to_string(r.variant) << ',' << r.beta << ',' << num(r.R)
       << ',' << num(r.snr_db) << ',' << num(r.ber) << ',' << num(r.ci) << ',' << r.method << ','
       << r.trials << '\n';
  return {os.str(), std::to_string(rows.size()) + " BER points\n"};
}

CommandResult cmd_thresholds(const Config& cfg) {
  const auto rs = ring_ratios(cfg);
  std::ostringstream os;
  os << csv_hash_line(cfg, "thresholds") << "R,beta,delta1,delta2,delta3,delta4,delta0\n";
  char buf[160];
  for (double R : rs) {
    for (int b = 3; b >= 1; --b) {
      const auto ts = dapsk::threshold_set(b, R);
      std::snprintf(buf, sizeof buf, "%s,%d,%.6f,%.6f,%.6f,%.6f,%.6f\n", num(R).c_str(), b,
                    ts.delta[0], ts.delta[1], ts.delta[2], ts.delta[3], ts.delta0);
      os << buf;
    }
  }
  return {os.str(), std::to_string(3 * rs.size()) + " threshold rows\n"};
}

CommandResult cmd_regions(const Config& cfg) {
  const auto sch = schemes(cfg);
  const double t = target(cfg);
  std::ostringstream os;
  os << csv_hash_line(cfg, "regions")
     << "scheme,R,target,gamma1,gamma2,gamma3,gamma4,gamma1_db,gamma2_db,gamma3_db,gamma4_db\n";
  std::vector<std::pair<Scheme, double>> jobs;
  for (Scheme s : sch) {
    if (s == Scheme::Dpsk) jobs.emplace_back(s, std::nan(""));
    else
      for (double R : ring_ratios(cfg)) jobs.emplace_back(s, R);
  }
  for (const auto& [s, R] : jobs) {
    const auto reg = operating_regions(s, std::isnan(R) ? 2.0 : R, t);
    os << to_string(s) << ',' << num(R) << ',' << num(t);
    for (double g : reg.threshold) os << ',' << num(g);
    for (double g : reg.threshold) os << ',' << num(linear_to_db(g));
    os << '\n';
  }
  return {os.str(), std::to_string(jobs.size()) + " region sets\n"};
}

CommandResult cmd_spec_eff(const Config& cfg) {
  const auto sch = schemes(cfg);
  const double t = target(cfg);
  const auto grid = cfg.snr_grid();
  std::ostringstream os, summary;
  os << csv_hash_line(cfg, "spec-eff") << "scheme,R,target,avg_snr_db,se\n";
  std::vector<std::tuple<Scheme, double, OperatingRegions>> regs;
  for (Scheme s : sch) {
    if (s == Scheme::Dpsk) regs.emplace_back(s, std::nan(""), operating_regions(s, 2.0, t));
    else
      for (double R : ring_ratios(cfg)) regs.emplace_back(s, R, operating_regions(s, R, t));
  }
  for (const auto& [s, R, reg] : regs)
    for (double db : grid)
      os << to_string(s) << ',' << num(R) << ',' << num(t) << ',' << num(db) << ','
         << num(spectral_efficiency(reg, db)) << '\n';

  for (const auto& [s1, R1, a] : regs) {
    if (s1 != Scheme::Dpsk) continue;
    for (const auto& [s2, R2, b] : regs) {
      if (s2 != Scheme::Dapsk) continue;
      const auto x = se_crossover(a, b, grid.front(), grid.back());
      if (x.found)
        summary << "crossover dpsk/dapsk(R=" << num(R2) << "): avg_snr_db=" << num(x.avg_snr_db)
                << " se=" << num(x.se) << '\n';
      else
        summary << "no dpsk/dapsk(R=" << num(R2) << ") crossover on the grid\n";
    }
  }
  return {os.str(), summary.str()};
}

CommandResult cmd_e2e(const Config& cfg) {
  E2eConfig e;
  e.scheme = single_scheme(cfg);
  const auto vars = variants(cfg);
  if (vars.size() != 1) throw ConfigError("e2e takes a single variant");
  e.variant = vars.front();
  e.ring_ratio = ring_ratios(cfg).front();
  const std::string ch = cfg.get("channel");
  if (ch == "awgn") e.channel = ChannelKind::Awgn;
  else if (ch == "rayleigh") e.channel = ChannelKind::Rayleigh;
  else throw ConfigError("channel must be awgn or rayleigh");
  e.snr_db = cfg.get_double("avg_snr_db");
  e.coherence_len = static_cast<int>(cfg.get_int("coherence_len"));
  if (e.coherence_len < 2) throw ConfigError("coherence_len must be >= 2");
  e.target_ber = target(cfg);
  const std::string beta = cfg.get("beta");
  if (beta != "adaptive") {
    e.fixed_beta = static_cast<int>(cfg.get_int("beta"));
    if (e.fixed_beta < 1 || e.fixed_beta > 4) throw ConfigError("beta must be adaptive or 1..4");
  }
  const auto k = cfg.get_uint("lt_k");
  if (k < 1 || k > 100000000) throw ConfigError("lt_k out of range");
  e.k = static_cast<std::uint32_t>(k);
  e.lt_c = cfg.get_double("lt_c");
  e.lt_delta = cfg.get_double("lt_delta");
  if (!(e.lt_c > 0.0)) throw ConfigError("lt_c must be positive");
  if (!(e.lt_delta > 0.0 && e.lt_delta < 1.0)) throw ConfigError("lt_delta must be in (0, 1)");
  e.epsilon = cfg.get_double("lt_epsilon");
  if (!(e.epsilon >= 0.0)) throw ConfigError("lt_epsilon must be >= 0");
  e.max_pairs = cfg.get_uint("max_pairs");
  if (e.max_pairs < 1) throw ConfigError("max_pairs must be >= 1");
  e.seed = cfg.get_uint("seed");
  const std::string fmt = cfg.get("transcript_format");
  if (fmt != "csv" && fmt != "jsonl") throw ConfigError("transcript_format must be csv or jsonl");

  const Transcript t = end_to_end_run(e);
  std::ostringstream os, summary;
  if (fmt == "csv") {
    os << csv_hash_line(cfg, "e2e");
    write_transcript_csv(os, t);
  } else {
    os << "{\"config_hash\":\"" << cfg.hash("e2e") << "\"}\n";
    write_transcript_jsonl(os, t);
  }
  summary << "outcome=" << to_string(t.outcome) << " pairs=" << t.pairs
          << " bits_decided=" << t.bits_decided << " bits_erased=" << t.bits_erased
          << " decided_errors=" << t.decided_errors << " bits_per_pair=" << num(t.bits_per_pair())
          << " bits_per_symbol=" << num(t.bits_per_symbol());
  if (t.message_ber) summary << " message_ber=" << num(*t.message_ber);
  if (e.fixed_beta == 0 && e.channel == ChannelKind::Rayleigh)
    summary << " analytic_se="
            << num(spectral_efficiency(e.scheme, e.ring_ratio, e.target_ber, e.snr_db));
  summary << '\n';
  return {os.str(), summary.str()};
}

CommandResult cmd_mapping_dump(const Config& cfg) {
  const Scheme s = single_scheme(cfg);
  std::ostringstream os;
  os << csv_hash_line(cfg, "mapping-dump");
  if (s == Scheme::Dpsk) write_mapping_csv(os, build_dpsk_mapping());
  else write_mapping_csv(os, build_dapsk_mapping(ring_ratios(cfg).front()));
  return {os.str(), ""};
}

CommandResult run_command(std::string_view name, const Config& cfg) {
  if (name == "ber") return cmd_ber(cfg);
  if (name == "thresholds") return cmd_thresholds(cfg);
  if (name == "regions") return cmd_regions(cfg);
  if (name == "spec-eff") return cmd_spec_eff(cfg);
  if (name == "e2e") return cmd_e2e(cfg);
  if (name == "mapping-dump") return cmd_mapping_dump(cfg);
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::string default_output_name(std::string_view name) {
  if (name == "ber") return "ber_curve.csv";
  if (name == "thresholds") return "thresholds.csv";
  if (name == "regions") return "regions.csv";
  if (name == "spec-eff") return "spec_eff.csv";
  if (name == "e2e") return "transcript.csv";
  return "mapping.csv";
}

}  // namespace adm
