#pragma once

namespace stablets {

/// Standard normal density.
double normal_pdf(double z) noexcept;

/// Standard normal CDF, computed as erfc(-z/sqrt 2)/2 so both tails keep full relative precision.
double normal_cdf(double z) noexcept;

/// 1 - Phi(z) without cancellation.
double normal_upper_tail(double z) noexcept;

/// Inverse of `normal_cdf` on (0, 1). Throws DomainError outside the open interval.
double normal_quantile(double p);

/// Wichura's AS 241 (PPND16) without argument checks; relative accuracy about 1e-16.
double normal_quantile_unchecked(double p) noexcept;

}  // namespace stablets
