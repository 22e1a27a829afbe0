#ifndef VOLTRISK_GMM_HPP_
#define VOLTRISK_GMM_HPP_

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "voltrisk/grid.hpp"

namespace voltrisk {

struct UvcSampleSet;  // defined in uvc.hpp

// Symmetric 2x2 covariance [[a, b], [b, c]].
struct Cov2 {
    double a = 1.0;
    double b = 0.0;
    double c = 1.0;

    double det() const { return a * c - b * b; }
    bool positive_definite() const { return a > 0.0 && det() > 0.0; }
};

struct Gmm2Component {
    double w = 1.0;
    std::array<double, 2> mu{0.0, 0.0};  // (true, predicted)
    Cov2 cov;
};

// Bivariate Gaussian mixture over (true UVC, predicted UVC), in pu^2.
struct Gmm2 {
    BusId bus = 0;
    int hour = 0;
    std::vector<Gmm2Component> comps;

    void validate() const;  // throws InputError on invariant violation
};

struct Gmm1Component {
    double w = 1.0;
    double mu = 0.0;
    double var = 1.0;
};

// Univariate Gaussian mixture, the conditional UVC model.
struct Gmm1 {
    std::vector<Gmm1Component> comps;

    void validate() const;
};

struct Bandwidths {
    double h = 0.0;       // true axis, pu^2
    double h_pred = 0.0;  // predicted axis, pu^2
};

// 0.9 * min(sigma, IQR/1.34) * N^(-1/5), floored at 1e-9. sigma is the
// Bessel-corrected sample standard deviation; IQR uses linear quantile
// interpolation.
double silverman_bandwidth(const std::vector<double>& samples);

// One Gaussian kernel per sample pair, weight 1/N, covariance
// diag(h^2, h_pred^2) with per-axis Silverman bandwidths. The kernel
// standard deviation equals the bandwidth.
Gmm2 fit_kde(const UvcSampleSet& samples);

// Greedy pairwise merging: repeatedly merge the component pair with the
// smallest KL-divergence upper bound of the moment-matched merge, until
// k_target components remain. Total weight, mean and second moments are
// preserved exactly (up to roundoff); ties break on lowest component index.
Gmm2 reduce_gmm(const Gmm2& g, int k_target);

// Condition on the predicted axis at v_pred: per-component Gaussian
// conditioning with weights proportional to the component marginal
// likelihood of v_pred (computed in log space).
Gmm1 condition(const Gmm2& g, double v_pred);

struct GmmEval {
    double pdf = 0.0;
    double cdf = 0.0;
};

GmmEval gmm_eval(const Gmm1& g, double x);
double gmm_pdf(const Gmm1& g, double x);
double gmm_cdf(const Gmm1& g, double x);

// (mean, variance) of the mixture.
std::pair<double, double> gmm_moments(const Gmm1& g);

// Distribution of -X: means negated, weights and variances kept.
Gmm1 negate(const Gmm1& g);

// JSON round trip: {bus, hour, K, components:[{w, mu:[2], cov:[[..],[..]]}]}.
// Serialization is bit-exact under parse(dump(model)).
std::string gmm2_to_json(const Gmm2& g);
Gmm2 gmm2_from_json(const std::string& text);

}  // namespace voltrisk

#endif  // VOLTRISK_GMM_HPP_
