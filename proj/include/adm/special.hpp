#pragma once

#include <span>

namespace adm {

// Above this argument log I0 switches from the direct library evaluation to
// the asymptotic (Hankel) series, which never overflows.
inline constexpr double kBesselLogCrossover = 20.0;

/// Natural log of the zeroth-order modified Bessel function of the first kind.
/// Finite for every finite x >= 0, including arguments far beyond the range
/// where I0 itself overflows a double.
double log_bessel_i0(double x);

double log_sum_exp(std::span<const double> values);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Converts dB to linear power ratio. +inf maps to +inf.
double db_to_linear(double db);
double linear_to_db(double x);

}  // namespace adm
