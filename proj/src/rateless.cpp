#include "adm/rateless.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "adm/channel.hpp"

namespace adm::lt {

DegreeDistribution robust_soliton(std::uint32_t k, double c, double delta) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0, 1)");

  DegreeDistribution dist;
  dist.k = k;
  dist.c = c;
  dist.delta = delta;
  const double kd = k;
  const double S = c * std::log(kd / delta) * std::sqrt(kd);
  const auto spike = static_cast<std::uint32_t>(
      std::clamp(std::llround(kd / S), 1LL, static_cast<long long>(k)));
  dist.spike = spike;

  std::vector<double> mu(k, 0.0);
  mu[0] = 1.0 / kd;
  for (std::uint32_t i = 2; i <= k; ++i) mu[i - 1] = 1.0 / (static_cast<double>(i) * (i - 1.0));
  if (S > 0.0) {
    for (std::uint32_t i = 1; i < spike; ++i) mu[i - 1] += S / (i * kd);
    const double tail = S * std::log(S / delta) / kd;
    if (tail > 0.0) mu[spike - 1] += tail;
  }
  double z = 0.0;
  for (double v : mu) z += v;
  dist.pmf.resize(k);
  dist.cdf.resize(k);
  double acc = 0.0;
  for (std::uint32_t i = 0; i < k; ++i) {
    dist.pmf[i] = mu[i] / z;
    acc += dist.pmf[i];
    dist.cdf[i] = acc;
  }
  dist.cdf.back() = 1.0;
  return dist;
}

std::vector<std::uint32_t> neighbors(std::uint64_t index, std::uint64_t seed,
                                     const DegreeDistribution& dist) {
  Engine eng = make_engine(seed, index);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x = u(eng);
  const auto it = std::upper_bound(dist.cdf.begin(), dist.cdf.end(), x);
  const auto degree = static_cast<std::uint32_t>(
      std::min<std::ptrdiff_t>(it - dist.cdf.begin(), dist.k - 1) + 1);

  // Floyd's sampling of `degree` distinct positions out of k.
  std::vector<std::uint32_t> out;
  out.reserve(degree);
  for (std::uint32_t j = dist.k - degree; j < dist.k; ++j) {
    std::uniform_int_distribution<std::uint32_t> pick(0, j);
    const std::uint32_t t = pick(eng);
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    else out.push_back(j);
  }
  return out;
}

Encoder::Encoder(std::vector<Bit> message, std::uint64_t seed, DegreeDistribution dist)
    : message_(std::move(message)), seed_(seed), dist_(std::move(dist)) {
  if (message_.size() != dist_.k) throw std::invalid_argument("message length must equal k");
}

EncodedBit Encoder::encode(std::uint64_t index) const {
  EncodedBit e;
  e.index = index;
  e.neighbors = neighbors(index, seed_, dist_);
  for (std::uint32_t v : e.neighbors) e.value ^= message_[v];
  return e;
}

std::vector<EncodedBit> lt_encode(std::span<const Bit> message, std::size_t count,
                                  std::uint64_t seed, const DegreeDistribution& dist,
                                  std::uint64_t first_index) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  const Encoder enc(std::vector<Bit>(message.begin(), message.end()), seed, dist);
  std::vector<EncodedBit> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(enc.encode(first_index + i));
  return out;
}

std::optional<std::vector<Bit>> peel_decode(std::span<const Received> received, std::uint32_t k,
                                            std::uint64_t seed, const DegreeDistribution& dist) {
  if (k != dist.k) throw std::invalid_argument("k does not match the degree distribution");
  {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(received.size());
    for (const auto& r : received)
      if (!seen.insert(r.first).second) throw std::invalid_argument("duplicate received index");
  }

  struct Check {
    std::vector<std::uint32_t> nbrs;
    std::uint32_t unknown;
    Bit value;
  };
  std::vector<Check> checks;
  checks.reserve(received.size());
  std::vector<std::vector<std::uint32_t>> adj(k);
  std::vector<std::uint32_t> ready;
  for (const auto& [idx, val] : received) {
    Check c{neighbors(idx, seed, dist), 0, val};
    c.unknown = static_cast<std::uint32_t>(c.nbrs.size());
    const auto ci = static_cast<std::uint32_t>(checks.size());
    for (std::uint32_t v : c.nbrs) adj[v].push_back(ci);
    if (c.unknown == 1) ready.push_back(ci);
    checks.push_back(std::move(c));
  }

  std::vector<Bit> msg(k, 0);
  std::vector<bool> known(k, false);
  std::uint32_t solved = 0;
  while (!ready.empty() && solved < k) {
    const std::uint32_t ci = ready.back();
    ready.pop_back();
    const Check& c = checks[ci];
    if (c.unknown != 1) continue;
    std::uint32_t v = k;
    for (std::uint32_t n : c.nbrs)
      if (!known[n]) { v = n; break; }
    if (v == k) continue;
    known[v] = true;
    msg[v] = c.value;
    ++solved;
    for (std::uint32_t cj : adj[v]) {
      Check& d = checks[cj];
      d.value ^= msg[v];
      if (--d.unknown == 1) ready.push_back(cj);
    }
  }
  if (solved < k) return std::nullopt;
  return msg;
}

}  // namespace adm::lt
