#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "adm/rateless.hpp"

using namespace adm;
using namespace adm::lt;

namespace {

// Robust soliton written out directly from its textbook definition.
std::vector<long double> soliton_oracle(unsigned k, long double c, long double delta) {
  const long double S = c * std::log(k / delta) * std::sqrt(static_cast<long double>(k));
  const long long spike = std::clamp(std::llround(k / S), 1LL, static_cast<long long>(k));
  std::vector<long double> p(k + 1, 0.0L);
  for (unsigned d = 1; d <= k; ++d) {
    const long double rho = d == 1 ? 1.0L / k : 1.0L / (static_cast<long double>(d) * (d - 1));
    long double tau = 0.0L;
    if (d < spike) tau = S / (static_cast<long double>(d) * k);
    else if (d == spike) tau = std::max(0.0L, S * std::log(S / delta) / k);  // S < delta has no spike
    p[d] = rho + tau;
  }
  long double z = 0.0L;
  for (auto v : p) z += v;
  for (auto& v : p) v /= z;
  return p;
}

std::vector<Bit> random_message(std::size_t k, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::vector<Bit> m(k);
  for (auto& b : m) b = static_cast<Bit>(g() & 1U);
  return m;
}

std::vector<Received> receive(const std::vector<EncodedBit>& enc) {
  std::vector<Received> r;
  for (const auto& e : enc) r.emplace_back(e.index, e.value);
  return r;
}

}  // namespace

TEST_SUITE("rateless") {

TEST_CASE("robust soliton matches an independent construction") {
  for (unsigned k : {1U, 2U, 10U, 100U, 1000U}) {
    for (double c : {0.03, 0.1, 0.5}) {
      const auto d = robust_soliton(k, c, 0.5);
      const auto ref = soliton_oracle(k, c, 0.5L);
      double sum = 0;
      for (unsigned i = 1; i <= k; ++i) {
        CHECK(d.pmf[i - 1] >= 0.0);
        CHECK(d.pmf[i - 1] == doctest::Approx(static_cast<double>(ref[i])).epsilon(1e-12));
        sum += d.pmf[i - 1];
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
      CHECK(d.pmf[0] > 0.0);
      CHECK(d.cdf.back() == 1.0);
    }
  }
  const auto one = robust_soliton(1, 0.1, 0.5);
  CHECK(one.pmf.size() == 1);
  CHECK(one.pmf[0] == 1.0);

  const auto d = robust_soliton(100, 0.1, 0.5);
  const double S = 0.1 * std::log(100 / 0.5) * 10.0;
  CHECK(d.spike == static_cast<unsigned>(std::llround(100 / S)));
  // The spike stands above both neighbours.
  CHECK(d.pmf[d.spike - 1] > d.pmf[d.spike - 2]);
  CHECK(d.pmf[d.spike - 1] > d.pmf[d.spike]);

  CHECK_THROWS_AS(robust_soliton(0, 0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(robust_soliton(10, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(robust_soliton(10, 0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(robust_soliton(10, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("empirical degree frequencies follow the pmf") {
  const auto d = robust_soliton(200, 0.1, 0.5);
  std::vector<int> count(201, 0);
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) ++count[neighbors(static_cast<std::uint64_t>(i), 77, d).size()];
  for (unsigned deg : {1U, 2U, 3U, d.spike}) {
    const double p = d.pmf[deg - 1];
    CHECK(std::abs(count[deg] / double(n) - p) < 5 * std::sqrt(p * (1 - p) / n) + 1e-9);
  }
}

TEST_CASE("neighbour sets") {
  const auto d = robust_soliton(50, 0.1, 0.5);
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const auto nb = neighbors(i, 9, d);
    REQUIRE(!nb.empty());
    std::set<std::uint32_t> s(nb.begin(), nb.end());
    CHECK(s.size() == nb.size());
    CHECK(*s.rbegin() < 50);
    CHECK(neighbors(i, 9, d) == nb);
  }
}

TEST_CASE("encoding") {
  const auto d = robust_soliton(64, 0.1, 0.5);
  const auto m1 = random_message(64, 1), m2 = random_message(64, 2);
  std::vector<Bit> mx(64);
  for (std::size_t i = 0; i < 64; ++i) mx[i] = m1[i] ^ m2[i];
  const auto e1 = lt_encode(m1, 500, 5, d), e2 = lt_encode(m2, 500, 5, d), ex = lt_encode(mx, 500, 5, d);
  const auto again = lt_encode(m1, 500, 5, d);
  int deg1 = 0;
  for (std::size_t i = 0; i < 500; ++i) {
    CHECK(e1[i].index == i);
    CHECK(ex[i].value == (e1[i].value ^ e2[i].value));
    CHECK(again[i].value == e1[i].value);
    CHECK(again[i].neighbors == e1[i].neighbors);
    if (e1[i].neighbors.size() == 1) {
      ++deg1;
      CHECK(e1[i].value == m1[e1[i].neighbors[0]]);
    }
  }
  CHECK(deg1 > 0);
  const auto shifted = lt_encode(m1, 10, 5, d, 100);
  CHECK(shifted[0].index == 100);
  CHECK(shifted[3].value == e1[103].value);
  const Encoder enc(m1, 5, d);
  CHECK(enc.value(42) == e1[42].value);
  CHECK_THROWS_AS(Encoder(random_message(10, 3), 5, d), std::invalid_argument);
}

TEST_CASE("peeling decoder") {
  const std::uint32_t k = 20;
  const auto d = robust_soliton(k, 0.1, 0.5);
  const auto msg = random_message(k, 4);
  const Encoder enc(msg, 8, d);

  // Degree-one bits covering every position.
  std::vector<Received> direct;
  std::set<std::uint32_t> covered;
  for (std::uint64_t i = 0; covered.size() < k; ++i) {
    const auto e = enc.encode(i);
    if (e.neighbors.size() == 1 && covered.insert(e.neighbors[0]).second) direct.emplace_back(i, e.value);
  }
  const auto out = peel_decode(direct, k, 8, d);
  REQUIRE(out.has_value());
  CHECK(*out == msg);

  CHECK(!peel_decode(std::vector<Received>{}, k, 8, d).has_value());
  std::vector<Received> dup = {{3, 0}, {3, 0}};
  CHECK_THROWS(peel_decode(dup, k, 8, d));
}

TEST_CASE("decoding is order invariant and re-encodes the received values") {
  const std::uint32_t k = 300;
  const auto d = robust_soliton(k, 0.1, 0.5);
  std::mt19937_64 g(12);
  int successes = 0;
  for (int t = 0; t < 40; ++t) {
    const auto msg = random_message(k, 100 + t);
    const auto enc = lt_encode(msg, 2 * k, 1000 + t, d);
    // Random erasure pattern, keep ~1.3k bits.
    std::vector<Received> rx;
    for (const auto& e : enc)
      if (g() % 20 < 13) rx.emplace_back(e.index, e.value);
    const auto a = peel_decode(rx, k, 1000 + t, d);
    auto shuffled = rx;
    std::shuffle(shuffled.begin(), shuffled.end(), g);
    const auto b = peel_decode(shuffled, k, 1000 + t, d);
    CHECK(a.has_value() == b.has_value());
    if (a) {
      ++successes;
      CHECK(*a == *b);
      CHECK(*a == msg);
      const Encoder re(*a, 1000 + t, d);
      for (const auto& [idx, v] : rx) CHECK(re.value(idx) == v);
    }
  }
  CHECK(successes > 0);
}

TEST_CASE("too few bits cannot decode") {
  const std::uint32_t k = 100;
  const auto d = robust_soliton(k, 0.1, 0.5);
  const auto enc = lt_encode(random_message(k, 5), k - 1, 3, d);
  CHECK(!peel_decode(receive(enc), k, 3, d).has_value());
}

}
