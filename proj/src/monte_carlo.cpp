#include "adm/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

#include "adm/channel.hpp"
#include "adm/constellation.hpp"
#include "adm/dapsk_demod.hpp"
#include "adm/dpsk_demod.hpp"
#include "adm/special.hpp"

namespace adm {

double McCount::ci() const {
  if (decided == 0) return 0.0;
  const double p = ber();
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(decided));
}

namespace {

struct Prepared {
  McSpec spec;
  DpskMapping dpsk = build_dpsk_mapping();
  DapskMapping dapsk;
  std::vector<dapsk::ThresholdSet> ts;  // per beta entry (unused for beta 4)
  double sigma2 = 0.0;
  double obs_sigma2 = 0.0;

  explicit Prepared(const McSpec& s)
      : spec(s), dapsk(build_dapsk_mapping(s.scheme == Scheme::Dapsk ? s.ring_ratio : 2.0)) {
    if (spec.betas.empty()) throw std::invalid_argument("no beta values requested");
    for (int b : spec.betas) {
      if (b < 1 || b > 4) throw std::invalid_argument("beta must be in 1..4");
      ts.push_back(b < 4 && spec.scheme == Scheme::Dapsk
                       ? dapsk::threshold_set(b, dapsk.ring_ratio())
                       : dapsk::ThresholdSet{});
    }
    sigma2 = sigma2_from_snr(db_to_linear(spec.snr_db));
    obs_sigma2 = std::max(sigma2, 1e-12);
  }
};

void tally(const BitVerdict& v, const std::array<Bit, 4>& tx, McCount& c) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!v.slots[i].has_value()) continue;
    ++c.decided;
    if (*v.slots[i] != tx[i]) ++c.errors;
  }
  ++c.pairs;
}

void run_chunk(const Prepared& P, std::uint64_t chunk, std::vector<McCount>& counts) {
  const McSpec& s = P.spec;
  const std::uint64_t first = chunk * kChunkPairs;
  const std::uint64_t n = std::min(kChunkPairs, s.trials - first);
  Engine eng = make_engine(s.seed, chunk);
  std::uniform_real_distribution<double> theta(-kPi, kPi);
  std::uniform_int_distribution<int> bit(0, 1);

  if (s.scheme == Scheme::Dpsk) {
    std::uniform_int_distribution<int> sym(0, 15);
    const auto& lab = P.dpsk.labeling();
    for (std::uint64_t k = 0; k < n; ++k) {
      const double th = theta(eng);
      const int m = sym(eng);
      const ComplexSample y0 = std::polar(1.0, th) + complex_gaussian(eng, P.sigma2);
      const ComplexSample y1 = std::polar(1.0, th + lab.angle(m)) + complex_gaussian(eng, P.sigma2);
      const auto obs = dpsk::observe(y0, y1, P.obs_sigma2);
      const BitRanking r = s.variant == Variant::Exact ? dpsk::rank_bits_exact(obs, P.dpsk)
                                                       : dpsk::rank_bits_high_snr(obs.phi, P.dpsk);
      const std::array<Bit, 4> tx = {lab.bit(m, 0), lab.bit(m, 1), lab.bit(m, 2), lab.bit(m, 3)};
      for (std::size_t j = 0; j < counts.size(); ++j)
        tally(verdict_from_ranking(r, counts[j].beta), tx, counts[j]);
    }
    return;
  }

  std::uniform_int_distribution<int> sym(0, 7);
  const DapskMapping& map = P.dapsk;
  const double R = map.ring_ratio();
  for (std::uint64_t k = 0; k < n; ++k) {
    const double th = theta(eng);
    const bool outer = bit(eng) == 1;
    const auto b0 = static_cast<Bit>(bit(eng));
    const int m = sym(eng);
    const double d = outer ? map.outer() : map.inner();
    const double a = b0 == 0 ? 1.0 : (outer ? 1.0 / R : R);
    const ComplexSample y0 = std::polar(d, th) + complex_gaussian(eng, P.sigma2);
    const ComplexSample y1 = std::polar(d * a, th + m * kPi / 4) + complex_gaussian(eng, P.sigma2);
    const auto obs = dapsk::observe(y0, y1, P.obs_sigma2);
    const std::array<Bit, 4> tx = {b0, map.phase_bit(m, 1), map.phase_bit(m, 2),
                                   map.phase_bit(m, 3)};
    if (s.variant == Variant::Simple) {
      for (std::size_t j = 0; j < counts.size(); ++j) {
        const int b = counts[j].beta;
        tally(b == 4 ? dapsk::optimal_rule_demod(obs, 4, map)
                     : dapsk::simple_demod_beta(obs, b, P.ts[j], map),
              tx, counts[j]);
      }
    } else {
      const BitRanking r = s.variant == Variant::Exact ? dapsk::rank_bits_exact(obs, map)
                                                       : dapsk::rank_bits_optimal(obs, map);
      for (std::size_t j = 0; j < counts.size(); ++j)
        tally(verdict_from_ranking(r, counts[j].beta), tx, counts[j]);
    }
  }
}

std::vector<McCount> empty_counts(const McSpec& s) {
  std::vector<McCount> c(s.betas.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j].beta = s.betas[j];
  return c;
}

std::uint64_t chunk_count(const McSpec& s) { return (s.trials + kChunkPairs - 1) / kChunkPairs; }

}  // namespace

std::vector<McCount> monte_carlo_serial(const McSpec& spec) {
  const Prepared P(spec);
  auto counts = empty_counts(spec);
  for (std::uint64_t c = 0; c < chunk_count(spec); ++c) run_chunk(P, c, counts);
  return counts;
}

std::vector<McCount> monte_carlo_parallel(const McSpec& spec, int workers) {
  const Prepared P(spec);
  const auto nchunks = static_cast<long long>(chunk_count(spec));
  const std::size_t nb = spec.betas.size();
  std::vector<std::uint64_t> decided(nb, 0), errors(nb, 0), pairs(nb, 0);
  const int threads = workers > 0 ? workers : omp_get_max_threads();

#pragma omp parallel num_threads(threads)
  {
    auto local = empty_counts(spec);
#pragma omp for schedule(dynamic, 1) nowait
    for (long long c = 0; c < nchunks; ++c) run_chunk(P, static_cast<std::uint64_t>(c), local);
#pragma omp critical
    for (std::size_t j = 0; j < nb; ++j) {
      decided[j] += local[j].decided;
      errors[j] += local[j].errors;
      pairs[j] += local[j].pairs;
    }
  }

  auto counts = empty_counts(spec);
  for (std::size_t j = 0; j < nb; ++j) {
    counts[j].decided = decided[j];
    counts[j].errors = errors[j];
    counts[j].pairs = pairs[j];
  }
  return counts;
}

McBer monte_carlo_ber(Scheme scheme, Variant variant, int beta, double gamma, double ring_ratio,
                      std::uint64_t trials, std::uint64_t seed, int workers) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  McSpec s;
  s.scheme = scheme;
  s.variant = variant;
  s.betas = {beta};
  s.snr_db = linear_to_db(gamma);
  s.ring_ratio = ring_ratio;
  s.trials = trials;
  s.seed = seed;
  const McCount c = monte_carlo_parallel(s, workers).front();
  return {c.ber(), c.ci()};
}

}  // namespace adm
