#include "hsicinf/truncated_normal.hpp"

#include "hsicinf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hsicinf {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kHalfLog2Pi = 0.9189385332046727;

std::string format_interval(double v, double w) {
  return "[" + std::to_string(v) + ", " + std::to_string(w) + "]";
}

// log(exp(x) - 1) for x >= 0 without overflowing exp.
double log_expm1(double x) {
  if (x > 36.0) return x + std::log1p(-std::exp(-x));
  return std::log(std::expm1(x));
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_logcdf(double x) {
  if (std::isnan(x)) throw NumericError("normal_logcdf: NaN input");
  if (x == std::numeric_limits<double>::infinity()) return 0.0;
  if (x == -std::numeric_limits<double>::infinity()) {
    return -std::numeric_limits<double>::infinity();
  }
  if (x > 6.0) {
    // Phi(x) is close to 1; go through the survival function to keep
    // log(Phi) from rounding to 0 prematurely.
    return std::log1p(-0.5 * std::erfc(x / kSqrt2));
  }
  if (x >= -37.0) {
    return std::log(0.5 * std::erfc(-x / kSqrt2));
  }
  // erfc underflows below; use the asymptotic expansion
  // Phi(x) = phi(x)/(-x) * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...).
  const double inv_x2 = 1.0 / (x * x);
  double term = 1.0;
  double series = 0.0;
  double coeff = 1.0;
  for (int i = 1; i <= 6; ++i) {
    coeff *= static_cast<double>(2 * i - 1);
    term *= -inv_x2;
    series += coeff * term;
  }
  return -0.5 * x * x - std::log(-x) - kHalfLog2Pi + std::log1p(series);
}

double trunc_norm_cdf(double x, const TruncatedNormalParams& params) {
  const double t = params.mean;
  const double u = params.variance;
  const double v = params.lower;
  const double w = params.upper;
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw DataError("trunc_norm_cdf: variance must be positive and finite, got " +
                    std::to_string(u));
  }
  if (!std::isfinite(t)) throw DataError("trunc_norm_cdf: mean must be finite");
  if (std::isnan(v) || std::isnan(w) || !(v < w)) {
    throw DataError("trunc_norm_cdf: invalid interval " + format_interval(v, w));
  }
  if (std::isnan(x) || !(x >= v && x <= w)) {
    throw DataError("trunc_norm_cdf: x=" + std::to_string(x) + " outside " +
                    format_interval(v, w));
  }
  if (x == v) return 0.0;
  if (x == w) return 1.0;

  const double scale = std::sqrt(u);
  const double a = (v - t) / scale;
  const double b = (w - t) / scale;
  const double xi = (x - t) / scale;

  if (a == -std::numeric_limits<double>::infinity() &&
      b == std::numeric_limits<double>::infinity()) {
    return normal_cdf(xi);
  }

  // Work on the tail where the CDF values stay representable: the left tail
  // (plain CDF) when the interval sits in the left half, the right tail
  // (survival function, via Phi(-y)) otherwise.
  const bool survival_side = a + b > 0.0;
  double la, lb, lxi;
  if (survival_side) {
    la = normal_logcdf(-a);
    lb = normal_logcdf(-b);
    lxi = normal_logcdf(-xi);
  } else {
    la = normal_logcdf(a);
    lb = normal_logcdf(b);
    lxi = normal_logcdf(xi);
  }

  double value;
  if (survival_side) {
    // F = (sf(a) - sf(xi)) / (sf(a) - sf(b)), all relative to sf(a).
    const double denom = std::expm1(lb - la);
    const double numer = std::expm1(lxi - la);
    if (denom == 0.0) {
      throw NumericError("trunc_norm_cdf: interval probability underflows for " +
                         format_interval(v, w));
    }
    value = numer / denom;
  } else if (la == -std::numeric_limits<double>::infinity()) {
    // v = -inf: F = Phi(xi) / Phi(b).
    value = std::exp(lxi - lb);
  } else {
    // F = expm1(lxi - la) / expm1(lb - la); both arguments are >= 0 and can
    // exceed the exp overflow threshold, so divide in log space instead.
    const double dnum = lxi - la;
    const double dden = lb - la;
    if (dden <= 0.0) {
      throw NumericError("trunc_norm_cdf: interval probability underflows for " +
                         format_interval(v, w));
    }
    value = dnum <= 0.0 ? 0.0 : std::exp(log_expm1(dnum) - log_expm1(dden));
  }

  if (std::isnan(value)) {
    throw NumericError("trunc_norm_cdf: evaluation lost all precision for " +
                       format_interval(v, w));
  }
  return std::clamp(value, 0.0, 1.0);
}

double trunc_norm_sf(double x, const TruncatedNormalParams& params) {
  TruncatedNormalParams reflected;
  reflected.mean = -params.mean;
  reflected.variance = params.variance;
  reflected.lower = -params.upper;
  reflected.upper = -params.lower;
  return trunc_norm_cdf(-x, reflected);
}

double selective_p_value(double score, double variance, const TruncationInterval& interval) {
  TruncatedNormalParams params;
  params.mean = 0.0;
  params.variance = variance;
  params.lower = interval.lower;
  params.upper = interval.upper;
  return trunc_norm_sf(score, params);
}

}  // namespace hsicinf
