#include "tailbound/normal.hpp"

#include <cmath>
#include <numbers>

#include "tailbound/error.hpp"

namespace tailbound::normal {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Acklam's coefficients.
constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                        -2.759285104469687e+02, 1.383577518672690e+02,
                        -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                        -1.556989798598866e+02, 6.680131188771972e+01,
                        -1.328068155288572e+01};
constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                        -2.400758277161838e+00, -2.549671464840095e+00,
                        4.374664141464968e+00,  2.938163982698783e+00};
constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                        2.445134137142996e+00, 3.754408661907416e+00};

constexpr double kLow = 0.02425;

// Lower-tail branch, valid for 0 < p <= 0.5.
double acklam_lower(double p) {
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// z with cdf(z) = p for p <= 0.5, refined by Halley's method.
double lower_quantile(double p) {
  double z = acklam_lower(p);
  for (int iter = 0; iter < 2; ++iter) {
    const double e = cdf(z) - p;
    const double u = e / pdf(z);
    z -= u / (1.0 + 0.5 * z * u);
  }
  return z;
}

}  // namespace

double pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double sf(double z) { return 0.5 * std::erfc(z * kInvSqrt2); }

double quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("normal quantile: probability must lie in (0, 1)");
  }
  if (p <= 0.5) return lower_quantile(p);
  return -lower_quantile(1.0 - p);
}

double upper_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("normal upper quantile: probability must lie in (0, 1)");
  }
  if (q <= 0.5) return -lower_quantile(q);
  return lower_quantile(1.0 - q);
}

}  // namespace tailbound::normal
