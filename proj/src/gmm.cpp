#include "voltrisk/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "voltrisk/errors.hpp"
#include "voltrisk/normal.hpp"
#include "voltrisk/uvc.hpp"

namespace voltrisk {

namespace {
constexpr double kWeightTol = 1e-12;
constexpr double kBandwidthFloor = 1e-9;
}  // namespace

void Gmm2::validate() const {
    if (comps.empty())
        throw InputError("Gmm2: no components");
    double wsum = 0.0;
    for (const auto& c : comps) {
        if (!(c.w > 0.0))
            throw InputError("Gmm2: component weights must be positive");
        if (!c.cov.positive_definite())
            throw InputError("Gmm2: component covariance is not positive definite");
        if (!std::isfinite(c.mu[0]) || !std::isfinite(c.mu[1]))
            throw InputError("Gmm2: non-finite component mean");
        wsum += c.w;
    }
    if (std::abs(wsum - 1.0) > kWeightTol)
        throw InputError("Gmm2: weights sum to " + std::to_string(wsum) + ", not 1");
}

void Gmm1::validate() const {
    if (comps.empty())
        throw InputError("Gmm1: no components");
    double wsum = 0.0;
    for (const auto& c : comps) {
        if (!(c.w > 0.0))
            throw InputError("Gmm1: component weights must be positive");
        if (!(c.var > 0.0))
            throw InputError("Gmm1: component variances must be positive");
        if (!std::isfinite(c.mu))
            throw InputError("Gmm1: non-finite component mean");
        wsum += c.w;
    }
    if (std::abs(wsum - 1.0) > kWeightTol)
        throw InputError("Gmm1: weights sum to " + std::to_string(wsum) + ", not 1");
}

namespace {

// Linear-interpolation quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    const double h = (static_cast<double>(n) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

double silverman_bandwidth(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    if (n < 2)
        throw InsufficientDataError("silverman_bandwidth: need at least 2 samples, got " +
                                    std::to_string(n));
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double sigma = std::sqrt(ss / static_cast<double>(n - 1));

    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

    const double spread = std::min(sigma, iqr / 1.34);
    const double bw = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
    return std::max(bw, kBandwidthFloor);
}

Gmm2 fit_kde(const UvcSampleSet& samples) {
    const std::size_t n = samples.size();
    if (n < 2)
        throw InsufficientDataError("fit_kde: need at least 2 samples at bus " +
                                    std::to_string(samples.bus) + " hour " +
                                    std::to_string(samples.hour));
    if (samples.v_pred.size() != n)
        throw InputError("fit_kde: sample columns are not aligned");

    const double h = silverman_bandwidth(samples.v_true);
    const double hp = silverman_bandwidth(samples.v_pred);

    Gmm2 g;
    g.bus = samples.bus;
    g.hour = samples.hour;
    g.comps.resize(n);
    const double w = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        g.comps[k].w = w;
        g.comps[k].mu = {samples.v_true[k], samples.v_pred[k]};
        g.comps[k].cov = {h * h, 0.0, hp * hp};
    }
    return g;
}

namespace {

Gmm2Component merge_pair(const Gmm2Component& a, const Gmm2Component& b) {
    Gmm2Component m;
    m.w = a.w + b.w;
    const double fa = a.w / m.w;
    const double fb = b.w / m.w;
    m.mu = {fa * a.mu[0] + fb * b.mu[0], fa * a.mu[1] + fb * b.mu[1]};
    const double da0 = a.mu[0] - m.mu[0], da1 = a.mu[1] - m.mu[1];
    const double db0 = b.mu[0] - m.mu[0], db1 = b.mu[1] - m.mu[1];
    m.cov.a = fa * (a.cov.a + da0 * da0) + fb * (b.cov.a + db0 * db0);
    m.cov.b = fa * (a.cov.b + da0 * da1) + fb * (b.cov.b + db0 * db1);
    m.cov.c = fa * (a.cov.c + da1 * da1) + fb * (b.cov.c + db1 * db1);
    return m;
}

// Upper bound on the KL divergence between the mixture before and after the
// moment-matched merge of components a and b (Runnalls' dissimilarity).
double merge_cost(const Gmm2Component& a, const Gmm2Component& b) {
    const Gmm2Component m = merge_pair(a, b);
    return 0.5 * (m.w * std::log(m.cov.det()) - a.w * std::log(a.cov.det()) -
                  b.w * std::log(b.cov.det()));
}

}  // namespace

Gmm2 reduce_gmm(const Gmm2& g, int k_target) {
    g.validate();
    const int k0 = static_cast<int>(g.comps.size());
    if (k_target < 1 || k_target > k0)
        throw InputError("reduce_gmm: k_target " + std::to_string(k_target) +
                         " outside [1, " + std::to_string(k0) + "]");
    if (k_target == k0) return g;

    std::vector<Gmm2Component> comps = g.comps;
    std::vector<bool> alive(comps.size(), true);

    // Cached per-row minimum over partners with a larger index.
    struct RowMin {
        double cost = std::numeric_limits<double>::infinity();
        int partner = -1;
    };
    std::vector<RowMin> row(comps.size());

    auto recompute_row = [&](int i) {
        row[i] = RowMin{};
        if (!alive[i]) return;
        for (int j = i + 1; j < static_cast<int>(comps.size()); ++j) {
            if (!alive[j]) continue;
            const double c = merge_cost(comps[i], comps[j]);
            if (c < row[i].cost) {
                row[i].cost = c;
                row[i].partner = j;
            }
        }
    };
    for (int i = 0; i < static_cast<int>(comps.size()); ++i) recompute_row(i);

    int k = k0;
    while (k > k_target) {
        int best = -1;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int i = 0; i < static_cast<int>(comps.size()); ++i) {
            if (alive[i] && row[i].partner >= 0 && row[i].cost < best_cost) {
                best_cost = row[i].cost;
                best = i;
            }
        }
        const int a = best;
        const int b = row[best].partner;
        comps[a] = merge_pair(comps[a], comps[b]);
        alive[b] = false;
        --k;

        recompute_row(a);
        row[b] = RowMin{};
        for (int i = 0; i < a; ++i) {
            if (!alive[i]) continue;
            if (row[i].partner == a || row[i].partner == b) {
                recompute_row(i);
            } else {
                const double c = merge_cost(comps[i], comps[a]);
                if (c < row[i].cost) {
                    row[i].cost = c;
                    row[i].partner = a;
                }
            }
        }
        for (int i = a + 1; i < b; ++i) {
            if (alive[i] && row[i].partner == b) recompute_row(i);
        }
    }

    Gmm2 out;
    out.bus = g.bus;
    out.hour = g.hour;
    for (std::size_t i = 0; i < comps.size(); ++i)
        if (alive[i]) out.comps.push_back(comps[i]);
    return out;
}

Gmm1 condition(const Gmm2& g, double v_pred) {
    g.validate();
    if (!std::isfinite(v_pred))
        throw InputError("condition: prediction must be finite");

    const std::size_t k = g.comps.size();
    std::vector<double> logw(k);
    double max_logw = -std::numeric_limits<double>::infinity();
    Gmm1 out;
    out.comps.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& c = g.comps[i];
        const double sigma_pred = std::sqrt(c.cov.c);
        out.comps[i].mu = c.mu[0] + (c.cov.b / c.cov.c) * (v_pred - c.mu[1]);
        out.comps[i].var = c.cov.a - c.cov.b * c.cov.b / c.cov.c;
        logw[i] = std::log(c.w) + norm_logpdf(v_pred, c.mu[1], sigma_pred);
        max_logw = std::max(max_logw, logw[i]);
    }
    if (!(max_logw > -std::numeric_limits<double>::infinity()))
        throw DegenerateConditioningError(
            "condition: every component marginal likelihood underflowed at v_pred = " +
            std::to_string(v_pred));

    double z = 0.0;
    for (std::size_t i = 0; i < k; ++i) z += std::exp(logw[i] - max_logw);
    for (std::size_t i = 0; i < k; ++i) out.comps[i].w = std::exp(logw[i] - max_logw) / z;

    // Drop zero-weight components (exact underflow after normalization).
    std::vector<Gmm1Component> kept;
    kept.reserve(k);
    for (const auto& c : out.comps)
        if (c.w > 0.0) kept.push_back(c);
    out.comps = std::move(kept);

    // Renormalize so the weights sum to one at full precision.
    double wsum = 0.0;
    for (const auto& c : out.comps) wsum += c.w;
    for (auto& c : out.comps) c.w /= wsum;
    return out;
}

GmmEval gmm_eval(const Gmm1& g, double x) {
    GmmEval e;
    for (const auto& c : g.comps) {
        const double sigma = std::sqrt(c.var);
        e.pdf += c.w * norm_pdf(x, c.mu, sigma);
        e.cdf += c.w * norm_cdf(x, c.mu, sigma);
    }
    return e;
}

double gmm_pdf(const Gmm1& g, double x) { return gmm_eval(g, x).pdf; }
double gmm_cdf(const Gmm1& g, double x) { return gmm_eval(g, x).cdf; }

std::pair<double, double> gmm_moments(const Gmm1& g) {
    double mean = 0.0;
    for (const auto& c : g.comps) mean += c.w * c.mu;
    double second = 0.0;
    for (const auto& c : g.comps) second += c.w * (c.var + c.mu * c.mu);
    return {mean, second - mean * mean};
}

Gmm1 negate(const Gmm1& g) {
    Gmm1 out = g;
    for (auto& c : out.comps) c.mu = -c.mu;
    return out;
}

std::string gmm2_to_json(const Gmm2& g) {
    nlohmann::json j;
    j["bus"] = g.bus;
    j["hour"] = g.hour;
    j["K"] = g.comps.size();
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : g.comps) {
        nlohmann::json jc;
        jc["w"] = c.w;
        jc["mu"] = {c.mu[0], c.mu[1]};
        jc["cov"] = {{c.cov.a, c.cov.b}, {c.cov.b, c.cov.c}};
        comps.push_back(jc);
    }
    j["components"] = comps;
    return j.dump(2);
}

Gmm2 gmm2_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("gmm2_from_json: ") + e.what());
    }
    Gmm2 g;
    try {
        g.bus = j.at("bus").get<int>();
        g.hour = j.at("hour").get<int>();
        for (const auto& jc : j.at("components")) {
            Gmm2Component c;
            c.w = jc.at("w").get<double>();
            c.mu = {jc.at("mu").at(0).get<double>(), jc.at("mu").at(1).get<double>()};
            c.cov.a = jc.at("cov").at(0).at(0).get<double>();
            c.cov.b = jc.at("cov").at(0).at(1).get<double>();
            c.cov.c = jc.at("cov").at(1).at(1).get<double>();
            g.comps.push_back(c);
        }
        if (j.at("K").get<std::size_t>() != g.comps.size())
            throw InputError("gmm2_from_json: K does not match component count");
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("gmm2_from_json: ") + e.what());
    }
    g.validate();
    return g;
}

}  // namespace voltrisk
