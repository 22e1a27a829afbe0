#ifndef VOLTRISK_GRID_HPP_
#define VOLTRISK_GRID_HPP_

#include <string>
#include <vector>

#include "voltrisk/linalg.hpp"

namespace voltrisk {

using BusId = int;

struct Branch {
    BusId from = 0;
    BusId to = 0;
    double r = 0.0;  // pu
    double x = 0.0;  // pu
};

struct BusSpec {
    BusId id = 0;
    double vmin = 0.95;  // voltage magnitude limit, pu
    double vmax = 1.05;  // voltage magnitude limit, pu
};

// Radial distribution feeder. Voltage limits are stored as magnitudes (pu)
// and squared on demand; all sensitivity math works in squared magnitudes.
struct Network {
    std::vector<BusSpec> buses;
    BusId slack_bus = 0;
    double v0 = 1.0;  // squared slack voltage, pu^2
    std::vector<Branch> branches;

    // Throws TopologyError / InputError if any invariant fails.
    void validate() const;

    // Non-slack buses in declaration order; this is the index order used by
    // every matrix and vector in the library.
    std::vector<BusId> non_slack_order() const;

    const BusSpec& bus(BusId id) const;
};

// Active/reactive power sensitivities of squared voltage magnitudes, both
// |I| x |I| over the non-slack buses in `order`.
struct SensitivityMatrices {
    std::vector<BusId> order;
    Matrix R;
    Matrix X;

    int index_of(BusId bus) const;  // -1 when absent
};

struct UncertainUnit {
    std::string id;
    BusId bus = 0;
    double kappa = 0.0;  // tangent of the power-factor angle
};

struct ConstantUnit {
    std::string id;
    BusId bus = 0;
    double kappa = 0.0;
    double p = 0.0;  // fixed active power, pu
};

struct Provider {
    std::string id;
    BusId bus = 0;
    double q_min = 0.0;  // pu
    double q_max = 0.0;  // pu
    double cost = 0.0;   // $ per unit reactive power
    double p_fixed = 0.0;
};

struct InjectionLayout {
    std::vector<UncertainUnit> uncertain_gens;
    std::vector<UncertainUnit> uncertain_loads;
    std::vector<ConstantUnit> constant_gens;
    std::vector<ConstantUnit> constant_loads;
    std::vector<Provider> providers;

    void validate(const Network& net) const;
};

// Per-element sensitivities of squared voltage: row = non-slack bus index,
// column = element index within its role. Each entry combines the R column
// of the element's bus with the kappa-scaled X column.
struct UvcCoefficients {
    std::vector<BusId> order;
    Matrix b_gen;         // uncertain generation
    Matrix b_load;        // uncertain loads
    Matrix b_q;           // provider reactive channel (X)
    Matrix b_p;           // provider active channel (R)
    Matrix b_const_gen;
    Matrix b_const_load;

    int index_of(BusId bus) const;
};

// Voltage sensitivities of the linear DistFlow model, computed by tree
// traversal: R[i][l] = 2 * sum of branch resistance over the common part of
// the slack->i and slack->l paths (X likewise with reactance).
SensitivityMatrices compute_sensitivities(const Network& net);

// v[i] = sum_l (R[i][l] P[l] + X[i][l] Q[l]) + v0, in pu^2.
std::vector<double> voltage_from_injections(const SensitivityMatrices& sens,
                                            const std::vector<double>& p,
                                            const std::vector<double>& q, double v0);

UvcCoefficients uvc_coefficients(const SensitivityMatrices& sens,
                                 const InjectionLayout& layout);

// File formats: network CSV `from,to,r_pu,x_pu`; bus CSV `bus,vmin_pu,vmax_pu`;
// layout CSV `id,role,bus,kappa,p_fixed,q_min,q_max,cost` with role in
// {ugen,uload,cgen,cload,provider}.
Network load_network_csv(const std::string& branch_path, const std::string& bus_path,
                         BusId slack_bus, double v0);
InjectionLayout load_layout_csv(const std::string& path, const Network& net);

}  // namespace voltrisk

#endif  // VOLTRISK_GRID_HPP_
