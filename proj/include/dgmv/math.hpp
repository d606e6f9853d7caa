#pragma once

namespace dgmv {

/// Standard normal CDF, accurate to machine precision via erfc.
double norm_cdf(double x);

/// Standard normal density.
double norm_pdf(double x);

/// Inverse standard normal CDF (Wichura's AS 241, double precision).
/// Requires p in (0, 1).
double inverse_norm_cdf(double p);

}  // namespace dgmv
