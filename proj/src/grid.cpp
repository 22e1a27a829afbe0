#include "voltrisk/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "voltrisk/csv.hpp"
#include "voltrisk/errors.hpp"

namespace voltrisk {

void Network::validate() const {
    if (buses.empty())
        throw InputError("network has no buses");
    if (!(v0 > 0.0) || !std::isfinite(v0))
        throw InputError("slack voltage v0 must be a positive finite pu^2 value");

    std::set<BusId> ids;
    bool slack_found = false;
    for (const auto& b : buses) {
        if (!ids.insert(b.id).second)
            throw InputError("duplicate bus id " + std::to_string(b.id));
        if (!(b.vmin > 0.0 && b.vmin < b.vmax))
            throw InputError("bus " + std::to_string(b.id) +
                             ": limits must satisfy 0 < vmin < vmax");
        if (b.id == slack_bus) slack_found = true;
    }
    if (!slack_found)
        throw InputError("slack bus " + std::to_string(slack_bus) + " not in bus list");

    for (const auto& br : branches) {
        if (br.from == br.to)
            throw TopologyError("branch with identical endpoints at bus " +
                                std::to_string(br.from));
        if (!ids.count(br.from) || !ids.count(br.to))
            throw TopologyError("branch " + std::to_string(br.from) + "-" +
                                std::to_string(br.to) + " references unknown bus");
        if (br.r < 0.0 || !std::isfinite(br.r) || !std::isfinite(br.x))
            throw InputError("branch " + std::to_string(br.from) + "-" +
                             std::to_string(br.to) + ": bad impedance");
    }

    // n-1 edges + full reachability from the slack <=> spanning tree.
    if (branches.size() != buses.size() - 1)
        throw TopologyError("network is not radial: " + std::to_string(branches.size()) +
                            " branches for " + std::to_string(buses.size()) + " buses");
    std::map<BusId, std::vector<BusId>> adj;
    for (const auto& br : branches) {
        adj[br.from].push_back(br.to);
        adj[br.to].push_back(br.from);
    }
    std::set<BusId> seen{slack_bus};
    std::vector<BusId> stack{slack_bus};
    while (!stack.empty()) {
        BusId u = stack.back();
        stack.pop_back();
        for (BusId v : adj[u])
            if (seen.insert(v).second) stack.push_back(v);
    }
    if (seen.size() != buses.size())
        throw TopologyError("network is disconnected: only " + std::to_string(seen.size()) +
                            " of " + std::to_string(buses.size()) +
                            " buses reachable from the slack");
}

std::vector<BusId> Network::non_slack_order() const {
    std::vector<BusId> order;
    order.reserve(buses.size() - 1);
    for (const auto& b : buses)
        if (b.id != slack_bus) order.push_back(b.id);
    return order;
}

const BusSpec& Network::bus(BusId id) const {
    for (const auto& b : buses)
        if (b.id == id) return b;
    throw InputError("unknown bus id " + std::to_string(id));
}

int SensitivityMatrices::index_of(BusId bus) const {
    auto it = std::find(order.begin(), order.end(), bus);
    if (it == order.end()) return -1;
    return static_cast<int>(it - order.begin());
}

int UvcCoefficients::index_of(BusId bus) const {
    auto it = std::find(order.begin(), order.end(), bus);
    if (it == order.end()) return -1;
    return static_cast<int>(it - order.begin());
}

SensitivityMatrices compute_sensitivities(const Network& net) {
    net.validate();

    // Root the tree at the slack and record each bus's parent branch.
    std::map<BusId, std::vector<std::pair<BusId, int>>> adj;  // bus -> (neighbor, branch)
    for (int bi = 0; bi < static_cast<int>(net.branches.size()); ++bi) {
        const auto& br = net.branches[bi];
        adj[br.from].emplace_back(br.to, bi);
        adj[br.to].emplace_back(br.from, bi);
    }
    std::map<BusId, BusId> parent;
    std::map<BusId, int> parent_branch;
    std::vector<BusId> stack{net.slack_bus};
    parent[net.slack_bus] = net.slack_bus;
    while (!stack.empty()) {
        BusId u = stack.back();
        stack.pop_back();
        for (auto [v, bi] : adj[u]) {
            if (parent.count(v)) continue;
            parent[v] = u;
            parent_branch[v] = bi;
            stack.push_back(v);
        }
    }

    // Slack->bus path as a branch list, slack end first.
    const auto order = net.non_slack_order();
    const std::size_t n = order.size();
    std::map<BusId, std::vector<int>> path;
    for (BusId b : order) {
        std::vector<int> p;
        for (BusId u = b; u != net.slack_bus; u = parent[u]) p.push_back(parent_branch[u]);
        std::reverse(p.begin(), p.end());
        path[b] = std::move(p);
    }

    SensitivityMatrices sens;
    sens.order = order;
    sens.R = Matrix(n, n);
    sens.X = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& pi = path[order[i]];
        for (std::size_t l = i; l < n; ++l) {
            const auto& pl = path[order[l]];
            // Common prefix of the two slack paths.
            double rsum = 0.0, xsum = 0.0;
            const std::size_t m = std::min(pi.size(), pl.size());
            for (std::size_t k = 0; k < m && pi[k] == pl[k]; ++k) {
                rsum += net.branches[pi[k]].r;
                xsum += net.branches[pi[k]].x;
            }
            sens.R(i, l) = 2.0 * rsum;
            sens.R(l, i) = 2.0 * rsum;
            sens.X(i, l) = 2.0 * xsum;
            sens.X(l, i) = 2.0 * xsum;
        }
    }
    return sens;
}

std::vector<double> voltage_from_injections(const SensitivityMatrices& sens,
                                            const std::vector<double>& p,
                                            const std::vector<double>& q, double v0) {
    const std::size_t n = sens.order.size();
    if (p.size() != n || q.size() != n)
        throw InputError("voltage_from_injections: injection vectors must have " +
                         std::to_string(n) + " entries");
    std::vector<double> v(n, v0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += sens.R(i, l) * p[l] + sens.X(i, l) * q[l];
        v[i] += s;
    }
    return v;
}

void InjectionLayout::validate(const Network& net) const {
    std::set<BusId> ids;
    for (const auto& b : net.buses) ids.insert(b.id);
    std::set<std::string> names;
    auto check = [&](const std::string& id, BusId bus) {
        if (!names.insert(id).second)
            throw InputError("duplicate element id '" + id + "'");
        if (!ids.count(bus))
            throw InputError("element '" + id + "' placed on unknown bus " +
                             std::to_string(bus));
        if (bus == net.slack_bus)
            throw InputError("element '" + id + "' placed on the slack bus");
    };
    for (const auto& u : uncertain_gens) check(u.id, u.bus);
    for (const auto& u : uncertain_loads) check(u.id, u.bus);
    for (const auto& u : constant_gens) check(u.id, u.bus);
    for (const auto& u : constant_loads) check(u.id, u.bus);
    for (const auto& pr : providers) {
        check(pr.id, pr.bus);
        if (pr.q_min > pr.q_max)
            throw InputError("provider '" + pr.id + "': q_min > q_max");
        if (pr.cost < 0.0)
            throw InputError("provider '" + pr.id + "': negative cost");
    }
}

namespace {

Matrix element_coeffs(const SensitivityMatrices& sens, const std::vector<BusId>& buses,
                      const std::vector<double>& kappas, const std::vector<std::string>& ids) {
    const std::size_t n = sens.order.size();
    Matrix b(n, buses.size());
    for (std::size_t e = 0; e < buses.size(); ++e) {
        const int l = sens.index_of(buses[e]);
        if (l < 0)
            throw InputError("element '" + ids[e] + "' placed on bus " +
                             std::to_string(buses[e]) + " which is not a non-slack bus");
        for (std::size_t i = 0; i < n; ++i)
            b(i, e) = sens.R(i, l) + kappas[e] * sens.X(i, l);
    }
    return b;
}

}  // namespace

UvcCoefficients uvc_coefficients(const SensitivityMatrices& sens,
                                 const InjectionLayout& layout) {
    UvcCoefficients c;
    c.order = sens.order;
    const std::size_t n = sens.order.size();

    auto unpack = [](const auto& units) {
        std::vector<BusId> buses;
        std::vector<double> kappas;
        std::vector<std::string> ids;
        for (const auto& u : units) {
            buses.push_back(u.bus);
            kappas.push_back(u.kappa);
            ids.push_back(u.id);
        }
        return std::make_tuple(buses, kappas, ids);
    };

    {
        auto [buses, kappas, ids] = unpack(layout.uncertain_gens);
        c.b_gen = element_coeffs(sens, buses, kappas, ids);
    }
    {
        auto [buses, kappas, ids] = unpack(layout.uncertain_loads);
        c.b_load = element_coeffs(sens, buses, kappas, ids);
    }
    {
        auto [buses, kappas, ids] = unpack(layout.constant_gens);
        c.b_const_gen = element_coeffs(sens, buses, kappas, ids);
    }
    {
        auto [buses, kappas, ids] = unpack(layout.constant_loads);
        c.b_const_load = element_coeffs(sens, buses, kappas, ids);
    }

    c.b_q = Matrix(n, layout.providers.size());
    c.b_p = Matrix(n, layout.providers.size());
    for (std::size_t j = 0; j < layout.providers.size(); ++j) {
        const int l = sens.index_of(layout.providers[j].bus);
        if (l < 0)
            throw InputError("provider '" + layout.providers[j].id +
                             "' placed on bus " + std::to_string(layout.providers[j].bus) +
                             " which is not a non-slack bus");
        for (std::size_t i = 0; i < n; ++i) {
            c.b_q(i, j) = sens.X(i, l);
            c.b_p(i, j) = sens.R(i, l);
        }
    }
    return c;
}

Network load_network_csv(const std::string& branch_path, const std::string& bus_path,
                         BusId slack_bus, double v0) {
    Network net;
    net.slack_bus = slack_bus;
    net.v0 = v0;

    const CsvTable buses = read_csv(bus_path);
    const int cb = buses.column("bus");
    const int cmin = buses.column("vmin_pu");
    const int cmax = buses.column("vmax_pu");
    if (cb < 0 || cmin < 0 || cmax < 0)
        throw InputError(bus_path + ": header must be bus,vmin_pu,vmax_pu");
    for (std::size_t r = 0; r < buses.rows.size(); ++r) {
        BusSpec b;
        b.id = static_cast<BusId>(csv_int(buses, r, cb));
        b.vmin = csv_double(buses, r, cmin);
        b.vmax = csv_double(buses, r, cmax);
        net.buses.push_back(b);
    }

    const CsvTable branches = read_csv(branch_path);
    const int cf = branches.column("from");
    const int ct = branches.column("to");
    const int cr = branches.column("r_pu");
    const int cx = branches.column("x_pu");
    if (cf < 0 || ct < 0 || cr < 0 || cx < 0)
        throw InputError(branch_path + ": header must be from,to,r_pu,x_pu");
    for (std::size_t r = 0; r < branches.rows.size(); ++r) {
        Branch br;
        br.from = static_cast<BusId>(csv_int(branches, r, cf));
        br.to = static_cast<BusId>(csv_int(branches, r, ct));
        br.r = csv_double(branches, r, cr);
        br.x = csv_double(branches, r, cx);
        net.branches.push_back(br);
    }

    net.validate();
    return net;
}

InjectionLayout load_layout_csv(const std::string& path, const Network& net) {
    const CsvTable t = read_csv(path);
    const int cid = t.column("id");
    const int crole = t.column("role");
    const int cbus = t.column("bus");
    const int ckappa = t.column("kappa");
    const int cp = t.column("p_fixed");
    const int cqmin = t.column("q_min");
    const int cqmax = t.column("q_max");
    const int ccost = t.column("cost");
    if (cid < 0 || crole < 0 || cbus < 0 || ckappa < 0 || cp < 0 || cqmin < 0 ||
        cqmax < 0 || ccost < 0)
        throw InputError(path +
                         ": header must be id,role,bus,kappa,p_fixed,q_min,q_max,cost");

    InjectionLayout layout;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string& role = t.rows[r][crole];
        const std::string& id = t.rows[r][cid];
        const BusId bus = static_cast<BusId>(csv_int(t, r, cbus));
        const double kappa = csv_double(t, r, ckappa);
        if (role == "ugen") {
            layout.uncertain_gens.push_back({id, bus, kappa});
        } else if (role == "uload") {
            layout.uncertain_loads.push_back({id, bus, kappa});
        } else if (role == "cgen") {
            layout.constant_gens.push_back({id, bus, kappa, csv_double(t, r, cp)});
        } else if (role == "cload") {
            layout.constant_loads.push_back({id, bus, kappa, csv_double(t, r, cp)});
        } else if (role == "provider") {
            Provider pr;
            pr.id = id;
            pr.bus = bus;
            pr.p_fixed = csv_double(t, r, cp);
            pr.q_min = csv_double(t, r, cqmin);
            pr.q_max = csv_double(t, r, cqmax);
            pr.cost = csv_double(t, r, ccost);
            layout.providers.push_back(pr);
        } else {
            throw InputError(path + ":" + std::to_string(t.line_numbers[r]) +
                             ": unknown role '" + role + "'");
        }
    }
    layout.validate(net);
    return layout;
}

}  // namespace voltrisk
