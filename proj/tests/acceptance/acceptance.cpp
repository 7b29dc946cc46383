#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "adm/analysis.hpp"
#include "adm/channel.hpp"
#include "adm/commands.hpp"
#include "adm/config.hpp"
#include "adm/constellation.hpp"
#include "adm/dapsk_demod.hpp"
#include "adm/dpsk_demod.hpp"
#include "adm/monte_carlo.hpp"
#include "adm/pipeline.hpp"
#include "adm/rateless.hpp"
#include "adm/special.hpp"

using namespace adm;

namespace {

// Tolerances and budgets.
constexpr double kDelta0RelTol = 0.02;
constexpr double kDelta0Lo = 0.67, kDelta0Hi = 0.69;
constexpr double kDelta0SnrDb = 30.0;
constexpr std::uint64_t kDapskPairs = 10'000'000;
constexpr double kLossTargetBer = 1e-4;
constexpr double kLossDb = 0.6, kLossTolDb = 0.3;
constexpr std::uint64_t kDpskPairs = 10'000'000;
constexpr double kDpskRelTol = 0.15;
constexpr double kResolvableBer = 1e-5;
constexpr double kSeTarget = 1e-4;
constexpr double kCrossLo = 2.0, kCrossHi = 3.0;
constexpr double kRingSnrDb = 20.0;
constexpr double kSymTol = 1e-9;
constexpr double kDpskAgree = 0.999, kDapskAgree = 0.95;
constexpr double kChannelTol = 0.01;
constexpr double kLtSuccess = 0.99;
constexpr double kE2eRelTol = 0.10;

struct Verdict {
  bool pass = true;
  std::string detail;
};

void note(const char* fmt, auto... args) {
  std::printf("  ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (double x = lo; x <= hi + 1e-9; x += step) g.push_back(x);
  return g;
}

std::vector<McCount> simulate(Scheme s, Variant v, double snr_db, std::uint64_t pairs,
                              std::uint64_t seed) {
  McSpec m;
  m.scheme = s;
  m.variant = v;
  m.betas = {1, 2, 3, 4};
  m.snr_db = snr_db;
  m.ring_ratio = 2.0;
  m.trials = pairs;
  m.seed = seed;
  return monte_carlo_parallel(m, 0);
}

// SNR (dB) where a log-BER curve first falls through `target`, by linear
// interpolation of log10 BER between grid points. NaN if never crossed.
double crossing_db(const std::vector<double>& db, const std::vector<double>& ber, double target) {
  for (std::size_t i = 0; i + 1 < db.size(); ++i) {
    if (ber[i] >= target && ber[i + 1] < target && ber[i + 1] > 0.0) {
      const double a = std::log10(ber[i]), b = std::log10(ber[i + 1]), t = std::log10(target);
      return db[i] + (a - t) / (a - b) * (db[i + 1] - db[i]);
    }
  }
  return std::nan("");
}

Verdict table1() {
  Config cfg;
  cfg.set("ring_ratio", "2");
  const std::string csv = cmd_thresholds(cfg).csv;
  const std::map<int, std::vector<std::string>> want = {
      {3, {"0.818", "0.745", "0.509", "0.364"}},
      {2, {"1.000", "0.910", "0.179", "0.000"}},
      {1, {"1.000", "1.000", "0.000", "0.000"}}};
  Verdict v;
  int rows = 0;
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'R') continue;
    std::istringstream ls(line);
    std::string R, beta, d[4];
    std::getline(ls, R, ',');
    std::getline(ls, beta, ',');
    for (auto& x : d) std::getline(ls, x, ',');
    const int b = std::stoi(beta);
    std::string got;
    for (int j = 0; j < 4; ++j) {
      const std::string r3 = fmt("%.3f", std::stod(d[j]));
      got += (j ? " " : "") + r3;
      if (r3 != want.at(b)[static_cast<std::size_t>(j)]) v.pass = false;
    }
    note("beta=%d: %s", b, got.c_str());
    ++rows;
  }
  if (rows != 3) v.pass = false;
  v.detail = fmt("%d rows compared at 3 decimals", rows);
  return v;
}

Verdict delta0() {
  Verdict v;
  double worst = 0.0, root2 = 0.0;
  for (double R : {1.5, 1.75, 2.0, 2.25, 2.5}) {
    const double est = dapsk::delta0_estimate(R), num = dapsk::delta0_numeric(R, kDelta0SnrDb);
    const double rel = std::abs(est - num) / num;
    worst = std::max(worst, rel);
    if (R == 2.0) root2 = num;
    note("R=%.2f estimate=%.5f numeric=%.5f rel=%.4f", R, est, num, rel);
  }
  const bool band = root2 >= kDelta0Lo && root2 <= kDelta0Hi;
  v.pass = worst <= kDelta0RelTol && band;
  v.detail = fmt("max rel %.4f (<= %.2f), R=2 root %.5f in [%.2f, %.2f]: %s", worst, kDelta0RelTol,
                 root2, kDelta0Lo, kDelta0Hi, band ? "yes" : "no");
  return v;
}

Verdict dapsk_simplified_vs_optimal() {
  const auto db = grid(0.0, 30.0, 1.0);
  std::vector<std::array<McCount, 4>> simple, rule;
  for (std::size_t i = 0; i < db.size(); ++i) {
    const auto s = simulate(Scheme::Dapsk, Variant::Simple, db[i], kDapskPairs, 100 + i);
    const auto r = simulate(Scheme::Dapsk, Variant::Rule, db[i], kDapskPairs, 500 + i);
    simple.push_back({s[0], s[1], s[2], s[3]});
    rule.push_back({r[0], r[1], r[2], r[3]});
    note("%4.1f dB simple %.3e %.3e %.3e %.3e | rule %.3e %.3e %.3e %.3e", db[i], s[0].ber(),
         s[1].ber(), s[2].ber(), s[3].ber(), r[0].ber(), r[1].ber(), r[2].ber(), r[3].ber());
  }
  Verdict v;
  int outside = 0, compared = 0;
  for (std::size_t b = 0; b < 2; ++b) {
    for (std::size_t i = 0; i < db.size(); ++i) {
      const auto &s = simple[i][b], &r = rule[i][b];
      if (std::max(s.ber(), r.ber()) < kResolvableBer) continue;
      ++compared;
      if (std::abs(s.ber() - r.ber()) > s.ci() + r.ci()) {
        ++outside;
        note("beta=%zu %.1f dB: |%.4e - %.4e| exceeds %.2e", b + 1, db[i], s.ber(), r.ber(),
             s.ci() + r.ci());
      }
    }
  }
  std::vector<double> bs, br;
  for (std::size_t i = 0; i < db.size(); ++i) {
    bs.push_back(simple[i][2].ber());
    br.push_back(rule[i][2].ber());
  }
  const double gs = crossing_db(db, bs, kLossTargetBer), gr = crossing_db(db, br, kLossTargetBer);
  const double loss = gs - gr;
  const bool loss_ok = std::isfinite(loss) && std::abs(loss - kLossDb) <= kLossTolDb;
  v.pass = outside == 0 && compared > 0 && loss_ok;
  v.detail = fmt("beta 1/2: %d of %d points outside 95%% bands; beta 3 loss at %.0e = %.3f dB "
                 "(simple %.2f dB, rule %.2f dB; want %.1f +- %.1f)",
                 outside, compared, kLossTargetBer, loss, gs, gr, kLossDb, kLossTolDb);
  return v;
}

Verdict dpsk_analytic_vs_mc() {
  const auto db = grid(0.0, 30.0, 2.0);
  Verdict v;
  double worst = 0.0;
  int compared = 0, order_bad = 0, mc_order_bad = 0;
  for (std::size_t i = 0; i < db.size(); ++i) {
    const double g = db_to_linear(db[i]);
    const auto mc = simulate(Scheme::Dpsk, Variant::Rule, db[i], kDpskPairs, 900 + i);
    std::array<double, 4> an{};
    for (int b = 1; b <= 4; ++b) an[static_cast<std::size_t>(b - 1)] = dpsk_ber(b, g);
    note("%4.1f dB analytic %.3e %.3e %.3e %.3e | mc %.3e %.3e %.3e %.3e", db[i], an[0], an[1],
         an[2], an[3], mc[0].ber(), mc[1].ber(), mc[2].ber(), mc[3].ber());
    for (std::size_t b = 0; b < 4; ++b) {
      if (mc[b].ber() < kResolvableBer) continue;
      ++compared;
      const double rel = std::abs(an[b] - mc[b].ber()) / mc[b].ber();
      worst = std::max(worst, rel);
      if (rel > kDpskRelTol) note("beta=%zu %.1f dB: rel %.3f", b + 1, db[i], rel);
    }
    if (!(an[0] < an[1] && an[1] < an[2] && an[2] < an[3])) {
      ++order_bad;
      note("analytic ordering violated at %.1f dB", db[i]);
    }
    // Simulated ordering wherever every curve has at least one error.
    if (mc[0].errors > 0 && !(mc[0].ber() < mc[1].ber() && mc[1].ber() < mc[2].ber() &&
                              mc[2].ber() < mc[3].ber())) {
      ++mc_order_bad;
      note("simulated ordering violated at %.1f dB", db[i]);
    }
  }
  v.pass = worst <= kDpskRelTol && order_bad == 0 && mc_order_bad == 0 && compared > 0;
  v.detail = fmt("max rel %.3f over %d points (<= %.2f); ordering violated at %d (analytic) and "
                 "%d (simulated) of %zu SNRs",
                 worst, compared, kDpskRelTol, order_bad, mc_order_bad, db.size());
  return v;
}

Verdict spectral_crossover() {
  const auto d = operating_regions(Scheme::Dpsk, 2.0, kSeTarget);
  const auto a = operating_regions(Scheme::Dapsk, 2.0, kSeTarget);
  const auto c = se_crossover(d, a, 0.0, 50.0, 0.5);
  Verdict v;
  int below_bad = 0;
  for (double x = 0.0; x < c.avg_snr_db && c.found; x += 0.5)
    if (spectral_efficiency(d, x) < spectral_efficiency(a, x)) ++below_bad;
  const bool above = c.found && spectral_efficiency(a, c.avg_snr_db + 5.0) >
                                    spectral_efficiency(d, c.avg_snr_db + 5.0);
  note("DPSK  regions (dB): %.2f %.2f %.2f %.2f", linear_to_db(d.threshold[0]),
       linear_to_db(d.threshold[1]), linear_to_db(d.threshold[2]), linear_to_db(d.threshold[3]));
  note("DAPSK regions (dB): %.2f %.2f %.2f %.2f", linear_to_db(a.threshold[0]),
       linear_to_db(a.threshold[1]), linear_to_db(a.threshold[2]), linear_to_db(a.threshold[3]));
  v.pass = c.found && c.se >= kCrossLo && c.se <= kCrossHi && below_bad == 0 && above;
  v.detail = c.found ? fmt("crossover at %.2f dB, %.3f bits/symbol (want [%.1f, %.1f])",
                           c.avg_snr_db, c.se, kCrossLo, kCrossHi)
                     : std::string("no crossover found");
  return v;
}

Verdict ring_ratio() {
  const std::vector<double> Rs = {1.6, 1.8, 2.0, 2.2, 2.4};
  const auto rows = ring_ratio_study({1, 2, 3, 4}, {kRingSnrDb}, Rs);
  std::map<int, std::vector<double>> ber;
  for (const auto& r : rows) ber[r.beta].push_back(r.ber);
  Verdict v;
  for (auto& [b, xs] : ber) {
    std::string s;
    for (double x : xs) s += fmt(" %.4e", x);
    note("beta=%d:%s", b, s.c_str());
  }
  const auto& b4 = ber[4];
  const auto argmin = static_cast<std::size_t>(std::min_element(b4.begin(), b4.end()) - b4.begin());
  bool mono = true;
  for (int b = 1; b <= 3; ++b)
    for (std::size_t i = 0; i + 1 < Rs.size(); ++i)
      if (ber[b][i + 1] < ber[b][i]) {
        mono = false;
        note("beta=%d decreases from R=%.1f to R=%.1f", b, Rs[i], Rs[i + 1]);
      }
  v.pass = Rs[argmin] == 2.0 && mono;
  v.detail = fmt("beta 4 minimum at R=%.1f; beta 1-3 non-decreasing: %s", Rs[argmin],
                 mono ? "yes" : "no");
  return v;
}

bool check(const char* name, bool ok, const std::string& info) {
  note("%-34s %s  %s", name, ok ? "ok    " : "FAILED", info.c_str());
  return ok;
}

Verdict properties() {
  Verdict v;
  int failed = 0;

  {  // LLR r <-> 1/r symmetry
    std::mt19937_64 g(2024);
    std::uniform_real_distribution<double> lr(std::log(0.2), std::log(5.0)), ps(-kPi, kPi),
        sn(0.0, 30.0), rr(1.2, 3.0);
    int bad = 0;
    for (int t = 0; t < 10000; ++t) {
      const auto map = build_dapsk_mapping(rr(g));
      const double r = std::exp(lr(g)), psi = ps(g), s2 = sigma2_from_snr(db_to_linear(sn(g)));
      const auto a = dapsk::exact_bit_llrs(dapsk::from_statistics(r, psi, s2), map);
      const auto b = dapsk::exact_bit_llrs(dapsk::from_statistics(1.0 / r, psi, s2), map);
      for (std::size_t i = 0; i < 4; ++i)
        if (std::abs(a[i] - b[i]) > kSymTol * std::max(1.0, std::abs(a[i]))) ++bad;
    }
    failed += !check("LLR r<->1/r symmetry", bad == 0, fmt("%d of 40000 LLRs off", bad));
  }

  const auto dmap = build_dpsk_mapping();
  {  // DPSK kept-set nesting
    int bad = 0;
    for (double s2 : {0.2, 0.05, 0.02, 0.005})
      for (int j = 0; j < 4096; ++j) {
        const double phi = -kPi + (j + 0.5) * 2 * kPi / 4096;
        const auto obs = dpsk::observe({1, 0}, std::polar(1.0, phi), s2);
        for (Variant var : {Variant::Rule, Variant::Exact}) {
          std::array<BitVerdict, 5> vs;
          for (int b = 1; b <= 4; ++b) vs[static_cast<std::size_t>(b)] = dpsk::demod_beta(obs, b, dmap, var);
          for (int b = 1; b < 4; ++b)
            for (int i = 0; i < 4; ++i) {
              const auto &lo = vs[static_cast<std::size_t>(b)], &hi = vs[static_cast<std::size_t>(b + 1)];
              if (!lo.erased(i) && (hi.erased(i) || *hi.slots[static_cast<std::size_t>(i)] !=
                                                        *lo.slots[static_cast<std::size_t>(i)]))
                ++bad;
            }
          for (int b = 1; b <= 4; ++b) bad += vs[static_cast<std::size_t>(b)].beta() != b;
        }
      }
    failed += !check("DPSK kept-set nesting", bad == 0, fmt("%d violations", bad));
  }

  {  // Partitions: DPSK error arcs vs pointwise decisions, DAPSK bands
    int bad = 0;
    for (int beta = 1; beta <= 4; ++beta)
      for (int tx = 0; tx < 16; ++tx) {
        const auto iv = dpsk_error_intervals(beta, tx, dmap);
        for (int j = 0; j < 2048; ++j) {
          const double off = -kPi + (j + 0.5) * 2 * kPi / 2048;
          bool inside = false;
          for (const auto& [a, b] : iv) inside = inside || (off > a && off < b);
          const double phi = wrap_angle(tx * kPi / 8 + off);
          const auto v = verdict_from_ranking(dpsk::rank_bits_high_snr(phi, dmap), beta);
          bool wrong = false;
          for (int i = 0; i < 4; ++i)
            if (!v.erased(i) && *v.slots[static_cast<std::size_t>(i)] != dmap.bit(tx, i)) wrong = true;
          bad += inside != wrong;
        }
      }
    for (double R : {1.5, 2.0, 2.5, 3.0})
      for (int beta = 1; beta <= 3; ++beta) {
        const auto ts = dapsk::threshold_set(beta, R);
        int prev = -1;
        for (int j = 1; j <= 100000; ++j) {
          const int band = static_cast<int>(dapsk::classify(j / 100000.0, ts));
          // Bands run from ReliableLow (4) up to ReliableHigh (0) as r' grows.
          if (prev >= 0 && band > prev) ++bad;
          prev = band;
        }
        for (double d : ts.delta)
          if (d > 0.0 && d < 1.0 &&
              dapsk::classify(d, ts) == dapsk::classify(std::nextafter(d, 2.0), ts))
            ++bad;
      }
    failed += !check("region/band partitions", bad == 0, fmt("%d mismatches", bad));
  }

  {  // DPSK exact-vs-rule ranking
    int agree = 0;
    constexpr int n = 4096;
    for (int j = 0; j < n; ++j) {
      const double phi = -kPi + (j + 0.5) * 2 * kPi / n;
      const auto obs = dpsk::observe({1, 0}, std::polar(1.0, phi), 0.02);
      agree += dpsk::rank_bits_high_snr(phi, dmap).order == dpsk::rank_bits_exact(obs, dmap).order;
    }
    const double f = double(agree) / n;
    failed += !check("DPSK ranking agreement", f >= kDpskAgree, fmt("%.4f (>= %.3f)", f, kDpskAgree));
  }

  {  // DAPSK optimal-rule vs exact ranking
    const auto map = build_dapsk_mapping(2.0);
    const double s2 = sigma2_from_snr(db_to_linear(25.0));
    int agree = 0;
    for (int i = 0; i < 256; ++i)
      for (int j = 0; j < 256; ++j) {
        const auto o = dapsk::from_statistics((i + 0.5) / 256.0, -kPi + (j + 0.5) * 2 * kPi / 256, s2);
        agree += dapsk::rank_bits_optimal(o, map).order == dapsk::rank_bits_exact(o, map).order;
      }
    const double f = agree / 65536.0;
    failed += !check("DAPSK ranking agreement", f >= kDapskAgree, fmt("%.4f (>= %.2f)", f, kDapskAgree));
  }

  {  // Channel SNR bookkeeping
    double worst = 0.0;
    constexpr std::size_t n = 1000000;
    SymbolStream in(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = std::polar(1.0, 0.7 * static_cast<double>(i));
    for (double db : {0.0, 10.0, 20.0}) {
      const auto out = apply_awgn(in, NoiseSpec{db}, 77);
      ComplexSample num = 0;
      for (std::size_t i = 0; i < n; ++i) num += out[i] * std::conj(in[i]);
      const ComplexSample g = num / double(n);
      double sig = 0, nse = 0;
      for (std::size_t i = 0; i < n; ++i) {
        sig += std::norm(in[i] * g);
        nse += std::norm(out[i] - in[i] * g);
      }
      worst = std::max(worst, std::abs(sig / nse - db_to_linear(db)) / db_to_linear(db));
    }
    failed += !check("channel SNR bookkeeping", worst <= kChannelTol, fmt("max rel %.4f", worst));
  }

  {  // LT decode success at 15% overhead
    constexpr std::uint32_t k = 1000;
    constexpr int trials = 500;
    const auto dist = lt::robust_soliton(k, 0.1, 0.5);
    const auto n = static_cast<std::size_t>(std::ceil(1.15 * k));
    int ok = 0, reenc_bad = 0;
    for (int t = 0; t < trials; ++t) {
      std::mt19937_64 g(31337 + t);
      std::vector<Bit> msg(k);
      for (auto& b : msg) b = static_cast<Bit>(g() & 1U);
      const std::uint64_t seed = 7000 + t;
      const auto enc = lt::lt_encode(msg, n, seed, dist);
      std::vector<lt::Received> rx;
      for (const auto& e : enc) rx.emplace_back(e.index, e.value);
      const auto out = lt::peel_decode(rx, k, seed, dist);
      if (!out) continue;
      ++ok;
      const lt::Encoder re(*out, seed, dist);
      for (const auto& [idx, val] : rx) reenc_bad += re.value(idx) != val;
    }
    const double f = double(ok) / trials;
    failed += !check("LT success at (1+0.15)k", f >= kLtSuccess && reenc_bad == 0,
                     fmt("%.3f (>= %.2f), re-encode mismatches %d", f, kLtSuccess, reenc_bad));
  }

  v.pass = failed == 0;
  v.detail = fmt("%d of 7 property checks failed", failed);
  return v;
}

Verdict e2e() {
  E2eConfig cfg;
  cfg.scheme = Scheme::Dpsk;
  cfg.channel = ChannelKind::Rayleigh;
  cfg.snr_db = 15.0;
  cfg.coherence_len = 2;
  cfg.target_ber = 1e-4;
  cfg.k = 10000;
  cfg.seed = 4242;
  const auto reg = operating_regions(Scheme::Dpsk, 2.0, cfg.target_ber);
  const auto t = end_to_end_run(cfg, reg);
  const double se = spectral_efficiency(reg, cfg.snr_db);
  const double rel = std::abs(t.bits_per_pair() - se) / se;
  note("pairs=%llu decided=%llu erased=%llu outcome=%s", static_cast<unsigned long long>(t.pairs),
       static_cast<unsigned long long>(t.bits_decided), static_cast<unsigned long long>(t.bits_erased),
       to_string(t.outcome));
  Verdict v;
  v.pass = rel <= kE2eRelTol;
  v.detail = fmt("realized %.4f bits/pair vs analytic %.4f (rel %.4f <= %.2f)", t.bits_per_pair(), se,
                 rel, kE2eRelTol);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::function<Verdict()>> criteria = {
      {"table1", table1},
      {"delta0", delta0},
      {"dapsk_simplified_vs_optimal", dapsk_simplified_vs_optimal},
      {"dpsk_analytic_vs_mc", dpsk_analytic_vs_mc},
      {"spectral_crossover", spectral_crossover},
      {"ring_ratio", ring_ratio},
      {"properties", properties},
      {"e2e", e2e}};
  std::vector<std::string> names;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) names.emplace_back(argv[i]);
  } else {
    for (const auto& [n, _] : criteria) names.push_back(n);
  }
  int failures = 0;
  for (const auto& n : names) {
    const auto it = criteria.find(n);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion '%s'\n", n.c_str());
      return 2;
    }
    Verdict v;
    try {
      v = it->second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", n.c_str(), v.detail.c_str());
    std::fflush(stdout);
    failures += !v.pass;
  }
  return failures == 0 ? 0 : 1;
}
