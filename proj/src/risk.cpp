#include "voltrisk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "voltrisk/errors.hpp"
#include "voltrisk/normal.hpp"

namespace voltrisk {

namespace {
constexpr double kCdfTol = 1e-10;
constexpr int kMaxNewton = 50;
constexpr double kPdfFloor = 1e-300;
}  // namespace

double var_gmm(const Gmm1& g, double tau, VarStats* stats) {
    g.validate();
    if (!(tau > 0.0 && tau < 1.0))
        throw InputError("var_gmm: tau must lie in (0, 1)");

    const auto [mean, variance] = gmm_moments(g);
    const double std_dev = std::sqrt(variance);
    double x = mean + norm_quantile(tau) * std_dev;

    const double lo_guard = mean - 10.0 * std_dev;
    const double hi_guard = mean + 10.0 * std_dev;

    int iters = 0;
    bool fallback = false;
    for (; iters < kMaxNewton; ++iters) {
        const GmmEval e = gmm_eval(g, x);
        if (std::abs(e.cdf - tau) <= kCdfTol) {
            if (stats) {
                stats->newton_iterations = iters;
                stats->used_fallback = false;
            }
            return x;
        }
        if (e.pdf < kPdfFloor) {
            fallback = true;
            break;
        }
        x += (tau - e.cdf) / e.pdf;
        if (x < lo_guard || x > hi_guard) {
            fallback = true;
            break;
        }
    }
    if (iters >= kMaxNewton) fallback = true;
    if (stats) {
        stats->newton_iterations = iters;
        stats->used_fallback = fallback;
    }

    // Bracket the root by expansion, then bisect with guarded Newton steps.
    double lo = lo_guard, hi = hi_guard;
    double step = 10.0 * std::max(std_dev, 1e-12);
    while (gmm_cdf(g, lo) > tau) {
        lo -= step;
        step *= 2.0;
    }
    step = 10.0 * std::max(std_dev, 1e-12);
    while (gmm_cdf(g, hi) < tau) {
        hi += step;
        step *= 2.0;
    }

    double best_x = 0.5 * (lo + hi);
    double best_err = std::abs(gmm_cdf(g, best_x) - tau);
    for (int k = 0; k < 500 && lo < hi; ++k) {
        double mid = 0.5 * (lo + hi);
        const GmmEval e = gmm_eval(g, mid);
        const double err = std::abs(e.cdf - tau);
        if (err < best_err) {
            best_err = err;
            best_x = mid;
        }
        if (err <= kCdfTol) return mid;
        if (e.cdf < tau)
            lo = mid;
        else
            hi = mid;
        // Newton step from the midpoint, kept only if it stays bracketed.
        if (e.pdf > kPdfFloor) {
            const double xn = mid + (tau - e.cdf) / e.pdf;
            if (xn > lo && xn < hi) {
                const double errn = std::abs(gmm_cdf(g, xn) - tau);
                if (errn <= kCdfTol) return xn;
                if (errn < best_err) {
                    best_err = errn;
                    best_x = xn;
                }
            }
        }
        if (hi - lo <= std::abs(mid) * 1e-17 + 1e-308) break;
    }
    if (best_err <= kCdfTol) return best_x;
    throw NumericError("var_gmm: no convergence; residual " + std::to_string(best_err) +
                       " at tau " + std::to_string(tau));
}

double cvar_gmm(const Gmm1& g, double tau) {
    g.validate();
    if (!(tau >= 0.0 && tau < 1.0))
        throw InputError("cvar_gmm: tau must lie in [0, 1)");
    if (tau == 0.0) return gmm_moments(g).first;

    const double var = var_gmm(g, tau);
    double acc = 0.0;
    for (const auto& c : g.comps) {
        const double sigma = std::sqrt(c.var);
        const double tail = 1.0 - norm_cdf(var, c.mu, sigma);
        acc += c.w * (c.mu * tail + c.var * norm_pdf(var, c.mu, sigma));
    }
    return acc / (1.0 - tau);
}

BusRisk assess_bus(const Gmm1& g, double tau, double v_c, double v_o) {
    if (!std::isfinite(v_c) || !std::isfinite(v_o))
        throw InputError("assess_bus: shifts must be finite");
    const Gmm1 neg = negate(g);
    const double shift = v_c + v_o;
    BusRisk r;
    r.var_upper = var_gmm(g, tau) + shift;
    r.var_lower = -var_gmm(neg, tau) + shift;
    r.cvar_upper = cvar_gmm(g, tau) + shift;
    r.cvar_lower = -cvar_gmm(neg, tau) + shift;
    return r;
}

RiskProfile make_risk_profile(const Gmm1& g, double tau, BusId bus, int hour) {
    const BusRisk r = assess_bus(g, tau, 0.0, 0.0);
    RiskProfile p;
    p.bus = bus;
    p.hour = hour;
    p.tau = tau;
    p.var_upper = r.var_upper;
    p.var_lower = r.var_lower;
    p.cvar_upper = r.cvar_upper;
    p.cvar_lower = r.cvar_lower;
    return p;
}

void write_risk_csv(const std::vector<RiskProfile>& profiles, std::ostream& out) {
    out << "bus,hour,tau,var_up,var_lo,cvar_up,cvar_lo\n";
    char buf[512];
    for (const auto& p : profiles) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", p.bus,
                      p.hour, p.tau, p.var_upper, p.var_lower, p.cvar_upper, p.cvar_lower);
        out << buf;
    }
}

std::vector<RiskProfile> read_risk_csv(std::istream& in) {
    std::vector<RiskProfile> out;
    std::string line;
    bool header = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        RiskProfile p;
        const int n = std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf,%lf,%lf", &p.bus, &p.hour,
                                  &p.tau, &p.var_upper, &p.var_lower, &p.cvar_upper,
                                  &p.cvar_lower);
        if (n != 7)
            throw InputError("risk CSV line " + std::to_string(lineno) + ": expected 7 fields");
        out.push_back(p);
    }
    return out;
}

}  // namespace voltrisk
