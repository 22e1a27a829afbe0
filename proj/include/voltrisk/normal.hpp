#ifndef VOLTRISK_NORMAL_HPP_
#define VOLTRISK_NORMAL_HPP_

namespace voltrisk {

// Standard normal density phi(z).
double norm_pdf(double z);

// Density of N(mu, sigma^2) at x.
double norm_pdf(double x, double mu, double sigma);

// Standard normal CDF Phi(z), evaluated through erfc so the tails keep
// full absolute accuracy (error <= 1e-14 everywhere).
double norm_cdf(double z);

// CDF of N(mu, sigma^2) at x.
double norm_cdf(double x, double mu, double sigma);

// Log-density of N(mu, sigma^2) at x.
double norm_logpdf(double x, double mu, double sigma);

// Inverse standard normal CDF. Rational initial guess polished with one
// Halley step against the erfc-based CDF.
double norm_quantile(double p);

}  // namespace voltrisk

#endif  // VOLTRISK_NORMAL_HPP_
