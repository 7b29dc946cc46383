#include "adm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "adm/channel.hpp"
#include "adm/dapsk_demod.hpp"
#include "adm/dpsk_demod.hpp"
#include "adm/special.hpp"

namespace adm {

namespace gk = boost::math::quadrature;

namespace {

// Adaptive bisection on GK15 panels; a panel is accepted once its error
// estimate meets either the absolute target or the relative one.
template <class F>
double gk_abs(const F& f, double a, double b, double tol, double rel, int depth, double* err) {
  double e = 0.0;
  const double v = gk::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &e);
  if (e <= std::max(tol, rel * std::abs(v)) || depth == 0) {
    *err += e;
    return v;
  }
  const double m = 0.5 * (a + b);
  return gk_abs(f, a, m, 0.5 * tol, rel, depth - 1, err) + gk_abs(f, m, b, 0.5 * tol, rel, depth - 1, err);
}

constexpr double kCellTol = 1e-18;
constexpr double kMassTol = 1e-8;
constexpr double kBerAbsFloor = 1e-14;

}  // namespace

double pawula_tail_angle(double angle, double gamma) {
  if (!(angle > 0.0 && angle < kPi / 2)) throw std::domain_error("angle must be in (0, pi/2)");
  if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
  const double c = std::cos(angle);
  return 0.5 * std::sqrt((1.0 + c) / (2.0 * c)) * std::erfc(std::sqrt(gamma * (1.0 - c)));
}

double pawula_tail(int M, double gamma) {
  if (M < 3) throw std::domain_error("M must be >= 3");
  return pawula_tail_angle(kPi / M, gamma);
}

double phase_tail_exact(double angle, double gamma) {
  if (!(angle >= 0.0 && angle <= kPi)) throw std::domain_error("angle must be in [0, pi]");
  if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
  const double c = std::cos(angle), s = std::sin(angle);
  if (s <= 0.0) return angle < 1.0 ? 0.5 : 0.0;
  auto f = [&](double t) {
    const double u = 1.0 - c * std::cos(t);
    return std::exp(-gamma * u) / u;
  };
  const double v = gk::gauss_kronrod<double, 31>::integrate(f, -kPi / 2, kPi / 2, 20, 1e-12);
  return s / (4.0 * kPi) * v;
}

double phase_tail(double angle, double gamma) {
  if (angle <= 0.0) return 0.5;
  if (angle <= kPi / 3 + 1e-12) return pawula_tail_angle(angle, gamma);
  return phase_tail_exact(std::min(angle, kPi), gamma);
}

std::vector<std::pair<double, double>> dpsk_error_intervals(int beta, int tx,
                                                            const DpskMapping& mapping) {
  if (beta < 1 || beta > 4) throw std::invalid_argument("beta must be in 1..4");
  const auto& lab = mapping.labeling();
  constexpr double w = kPi / 16;
  std::vector<std::pair<double, double>> out;
  for (int c = -16; c < 16; ++c) {
    const double phi = wrap_angle(lab.angle(tx) + (c + 0.5) * w);
    const auto r = dpsk::rank_bits_high_snr(phi, mapping);
    const BitVerdict v = verdict_from_ranking(r, beta);
    bool wrong = false;
    for (int i = 0; i < 4; ++i)
      if (!v.erased(i) && *v.slots[static_cast<std::size_t>(i)] != lab.bit(tx, i)) wrong = true;
    if (!wrong) continue;
    const double lo = c * w, hi = (c + 1) * w;
    if (!out.empty() && std::abs(out.back().second - lo) < 1e-12) out.back().second = hi;
    else out.emplace_back(lo, hi);
  }
  return out;
}

namespace {

double interval_probability(double u, double v, double gamma) {
  if (u >= 0.0) return phase_tail(u, gamma) - phase_tail(v, gamma);
  return phase_tail(-v, gamma) - phase_tail(-u, gamma);
}

const std::array<std::array<std::vector<std::pair<double, double>>, 16>, 4>& error_table() {
  static const auto table = [] {
    const DpskMapping mapping = build_dpsk_mapping();
    std::array<std::array<std::vector<std::pair<double, double>>, 16>, 4> t;
    for (int b = 1; b <= 4; ++b)
      for (int tx = 0; tx < 16; ++tx)
        t[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(tx)] =
            dpsk_error_intervals(b, tx, mapping);
    return t;
  }();
  return table;
}

}  // namespace

double dpsk_symbol_error(int beta, double gamma) {
  if (beta < 1 || beta > 4) throw std::invalid_argument("beta must be in 1..4");
  if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
  const auto& rows = error_table()[static_cast<std::size_t>(beta - 1)];
  double acc = 0.0;
  for (const auto& row : rows)
    for (const auto& [u, v] : row) acc += interval_probability(u, v, gamma);
  return acc / 16.0;
}

double dpsk_ber(int beta, double gamma) { return dpsk_symbol_error(beta, gamma) / beta; }

QuadratureBer dapsk_ber_quadrature(int beta, double gamma, double R, double rel_tol) {
  if (beta < 1 || beta > 4) throw std::invalid_argument("beta must be in 1..4");
  if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
  const DapskMapping mapping = build_dapsk_mapping(R);
  const double s2 = sigma2_from_snr(gamma);

  // Decisions are constant on r-segments between thresholds (and their
  // reciprocals) and on pi/32 cells of psi.
  // Density peaks sit at r in {1, R, 1/R}; cutting there keeps them on panel edges.
  std::vector<double> cuts = {1.0, 1.0 / R, mapping.amplitude_threshold()};
  dapsk::ThresholdSet ts;
  if (beta < 4) {
    ts = dapsk::threshold_set(beta, R);
    cuts.insert(cuts.end(), ts.delta.begin(), ts.delta.end());
  }
  std::vector<double> edges = {0.0};
  for (double t : cuts) {
    if (t > 0.0 && t <= 1.0) {
      edges.push_back(t);
      edges.push_back(1.0 / t);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              edges.end());
  edges.push_back(std::numeric_limits<double>::infinity());

  constexpr int kCells = 64;
  constexpr double w = 2.0 * kPi / kCells;
  const double A1 = mapping.inner(), A2 = mapping.outer();

  QuadratureBer out;
  double err_acc = 0.0, err_est = 0.0, mass = 0.0;
  int n_hyp = 0;
  // Rotating the transmitted phase by two steps permutes b1/b2 without
  // changing error counts, so phase indices 0 and 1 cover all eight.
  for (double d : {A1, A2}) {
    for (Bit b0 : {Bit{0}, Bit{1}}) {
      const double a = b0 == 0 ? 1.0 : (d == A1 ? R : 1.0 / R);
      for (int m = 0; m < 2; ++m) {
        ++n_hyp;
        const dapsk::Hypothesis h{d, a, m * kPi / 4};
        const std::array<Bit, 4> tx = {b0, mapping.phase_bit(m, 1), mapping.phase_bit(m, 2),
                                       mapping.phase_bit(m, 3)};
        for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
          const double r0 = edges[s], r1 = edges[s + 1];
          const double rmid = std::isinf(r1) ? r0 + 1.0 : 0.5 * (r0 + r1);
          for (int c = 0; c < kCells; ++c) {
            const double p0 = -kPi + c * w, p1 = p0 + w;
            const auto obs = dapsk::from_statistics(rmid, 0.5 * (p0 + p1), s2);
            const BitVerdict v = beta == 4 ? dapsk::optimal_rule_demod(obs, 4, mapping)
                                           : dapsk::simple_demod_beta(obs, beta, ts, mapping);
            int errors = 0;
            for (std::size_t i = 0; i < 4; ++i)
              if (v.slots[i].has_value() && *v.slots[i] != tx[i]) ++errors;

            // Error-free cells only feed the mass check.
            const double tol = errors > 0 ? kCellTol : kMassTol;
            const bool tail = std::isinf(r1);
            // Semi-infinite segment mapped onto [0, 1) via r = r0 + t / (1 - t).
            const double u0 = tail ? 0.0 : r0, u1 = tail ? 1.0 : r1;
            auto inner = [&](double u) {
              double r = u, jac = 1.0;
              if (tail) {
                if (u >= 1.0) return 0.0;
                r = r0 + u / (1.0 - u);
                jac = 1.0 / ((1.0 - u) * (1.0 - u));
              }
              auto f = [&](double psi) { return dapsk::joint_density(r, psi, h, s2, mapping); };
              double ie = 0.0;
              return jac * gk_abs(f, p0, p1, tol / (u1 - u0) / std::max(jac, 1.0), 1e-9, 24, &ie);
            };
            double e = 0.0;
            const double p = gk_abs(inner, u0, u1, tol, 1e-7, 24, &e);
            mass += p;
            if (errors > 0) {
              err_acc += errors * p;
              err_est += errors * e;
            }
          }
        }
      }
    }
  }
  out.total_mass = mass / n_hyp;
  out.ber = err_acc / n_hyp / beta;
  out.abs_error = err_est / n_hyp / beta;
  if (out.abs_error > rel_tol * out.ber && out.abs_error > kBerAbsFloor)
    throw std::runtime_error("DAPSK BER quadrature reached only relative error " +
                             std::to_string(out.abs_error / out.ber));
  return out;
}

double dapsk_ber_numeric(int beta, double gamma, double R) {
  return dapsk_ber_quadrature(beta, gamma, R).ber;
}

double analytic_ber(Scheme scheme, int beta, double gamma, double R) {
  return scheme == Scheme::Dpsk ? dpsk_ber(beta, gamma) : dapsk_ber_numeric(beta, gamma, R);
}

int OperatingRegions::beta_for(double gamma) const {
  int b = 0;
  for (int i = 0; i < 4; ++i)
    if (gamma >= threshold[static_cast<std::size_t>(i)]) b = i + 1;
  return b;
}

OperatingRegions operating_regions(Scheme scheme, double R, double target, double lo_db,
                                   double hi_db) {
  if (!(target > 0.0 && target < 0.5)) throw std::invalid_argument("target BER must be in (0, 0.5)");
  OperatingRegions out;
  out.scheme = scheme;
  out.ring_ratio = R;
  out.target_ber = target;
  const double lt = std::log(target);
  for (int beta = 1; beta <= 4; ++beta) {
    const auto i = static_cast<std::size_t>(beta - 1);
    auto f = [&](double db) {
      return std::log(std::max(analytic_ber(scheme, beta, db_to_linear(db), R), 1e-300)) - lt;
    };
    const double fhi = f(hi_db);
    if (fhi > 0.0) {
      out.crossing[i] = std::numeric_limits<double>::infinity();
      out.attainable[i] = false;
      continue;
    }
    const double flo = f(lo_db);
    if (flo <= 0.0) {
      out.crossing[i] = db_to_linear(lo_db);
      out.attainable[i] = true;
      continue;
    }
    std::uintmax_t iters = 100;
    const auto [a, b] = boost::math::tools::toms748_solve(
        f, lo_db, hi_db, flo, fhi, boost::math::tools::eps_tolerance<double>(40), iters);
    out.crossing[i] = db_to_linear(0.5 * (a + b));
    out.attainable[i] = true;
  }
  double run = std::numeric_limits<double>::infinity();
  for (int i = 3; i >= 0; --i) {
    run = std::min(run, out.crossing[static_cast<std::size_t>(i)]);
    out.threshold[static_cast<std::size_t>(i)] = run;
  }
  return out;
}

double spectral_efficiency(const OperatingRegions& regions, double avg_snr_db) {
  if (std::isinf(avg_snr_db) && avg_snr_db > 0.0) return 4.0;
  const double gbar = db_to_linear(avg_snr_db);
  auto mass_above = [&](double g) { return std::isinf(g) ? 0.0 : std::exp(-g / gbar); };
  double se = 0.0;
  for (int b = 1; b <= 4; ++b) {
    const double lo = regions.threshold[static_cast<std::size_t>(b - 1)];
    const double hi = b < 4 ? regions.threshold[static_cast<std::size_t>(b)]
                            : std::numeric_limits<double>::infinity();
    se += b * (mass_above(lo) - mass_above(hi));
  }
  return se;
}

double spectral_efficiency(Scheme scheme, double R, double target, double avg_snr_db) {
  return spectral_efficiency(operating_regions(scheme, R, target), avg_snr_db);
}

Crossover se_crossover(const OperatingRegions& a, const OperatingRegions& b, double lo_db,
                       double hi_db, double step_db) {
  auto diff = [&](double db) { return spectral_efficiency(a, db) - spectral_efficiency(b, db); };
  Crossover out;
  double x0 = lo_db, d0 = diff(x0);
  for (double x1 = lo_db + step_db; x1 <= hi_db + 1e-9; x1 += step_db) {
    const double d1 = diff(x1);
    if (d0 > 0.0 && d1 <= 0.0) {
      double lo = x0, hi = x1;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (diff(mid) > 0.0) lo = mid;
        else hi = mid;
      }
      out.found = true;
      out.avg_snr_db = 0.5 * (lo + hi);
      out.se = spectral_efficiency(a, out.avg_snr_db);
      return out;
    }
    x0 = x1;
    d0 = d1;
  }
  return out;
}

std::vector<RingRatioRow> ring_ratio_study(const std::vector<int>& betas,
                                           const std::vector<double>& snr_db,
                                           const std::vector<double>& ring_ratios) {
  for (double R : ring_ratios)
    if (!(R > 1.0 && R <= 3.0)) throw std::invalid_argument("ring ratios must lie in (1, 3]");
  std::vector<RingRatioRow> rows;
  for (int beta : betas)
    for (double R : ring_ratios)
      for (double db : snr_db)
        rows.push_back({beta, R, db, dapsk_ber_numeric(beta, db_to_linear(db), R)});
  return rows;
}

}  // namespace adm
