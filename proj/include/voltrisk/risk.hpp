#ifndef VOLTRISK_RISK_HPP_
#define VOLTRISK_RISK_HPP_

#include <iosfwd>
#include <vector>

#include "voltrisk/gmm.hpp"

namespace voltrisk {

// VaR/CVaR of the conditional UVC at one (bus, hour), both tail sides, pu^2.
struct RiskProfile {
    BusId bus = 0;
    int hour = 0;
    double tau = 0.95;
    double var_upper = 0.0;   // VaR_tau(v_r | prediction)
    double var_lower = 0.0;   // -VaR_tau(-v_r | prediction)
    double cvar_upper = 0.0;
    double cvar_lower = 0.0;
};

struct VarStats {
    int newton_iterations = 0;
    bool used_fallback = false;
};

// tau-quantile of the mixture: solves cdf(x) = tau by Newton-Raphson from
// mean + Phi^-1(tau) * std, guarded by bisection on a bracketing interval.
// Converges to |cdf(x) - tau| <= 1e-10.
double var_gmm(const Gmm1& g, double tau, VarStats* stats = nullptr);

// Closed-form tail mean beyond VaR:
//   (1/(1-tau)) * sum_k w_k (mu_k [1 - F_k(VaR)] + var_k f_k(VaR)).
// tau = 0 returns the mixture mean.
double cvar_gmm(const Gmm1& g, double tau);

// Full-voltage risk indices at a bus: the UVC indices shifted by the
// controllable and constant components.
struct BusRisk {
    double var_upper = 0.0;
    double var_lower = 0.0;
    double cvar_upper = 0.0;
    double cvar_lower = 0.0;
};

BusRisk assess_bus(const Gmm1& g, double tau, double v_c, double v_o);

// UVC-only profile (v_c = v_o = 0) for one conditional model.
RiskProfile make_risk_profile(const Gmm1& g, double tau, BusId bus, int hour);

// CSV report `bus,hour,tau,var_up,var_lo,cvar_up,cvar_lo` at 12 significant
// digits.
void write_risk_csv(const std::vector<RiskProfile>& profiles, std::ostream& out);
std::vector<RiskProfile> read_risk_csv(std::istream& in);

}  // namespace voltrisk

#endif  // VOLTRISK_RISK_HPP_
