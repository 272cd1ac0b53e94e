#pragma once

namespace tailbound::normal {

double pdf(double z);

/// Standard normal cdf, computed through erfc so both tails keep full
/// relative precision.
double cdf(double z);

/// Upper tail 1 - cdf(z).
double sf(double z);

/// Inverse of cdf on (0, 1). Acklam's rational approximation refined by one
/// Halley step against erfc; absolute error below 1e-15 in practice.
double quantile(double p);

/// Inverse of sf: returns z with sf(z) = q. Accurate for tiny q where
/// quantile(1 - q) would lose digits.
double upper_quantile(double q);

}  // namespace tailbound::normal
