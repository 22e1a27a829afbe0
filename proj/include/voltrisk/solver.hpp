#ifndef VOLTRISK_SOLVER_HPP_
#define VOLTRISK_SOLVER_HPP_

#include <limits>
#include <string>
#include <vector>

namespace voltrisk {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LinearTerm {
    int var = 0;
    double coef = 0.0;
};

// Ranged row lo <= a'x <= hi; equality when lo == hi.
struct LpRow {
    std::vector<LinearTerm> terms;
    double lo = -kInf;
    double hi = kInf;
    std::string name;
};

// Minimize c'x subject to variable bounds and ranged linear rows.
struct LpProblem {
    std::vector<std::string> var_names;
    std::vector<double> lo, hi, obj;
    std::vector<LpRow> rows;

    int add_variable(const std::string& name, double lb, double ub, double cost = 0.0);
    void add_row(std::vector<LinearTerm> terms, double lb, double ub,
                 const std::string& name = "");
    int num_vars() const { return static_cast<int>(obj.size()); }

    void validate() const;
};

// LP plus binary markers and SOS2 group descriptors. The SOS2 adjacency
// logic is expressed through the binary variables and rows already present
// in `lp`; `sos2_groups` only documents the lambda groups for the dump.
struct MilpProblem {
    LpProblem lp;
    std::vector<int> binaries;
    std::vector<std::vector<int>> sos2_groups;
};

enum class SolveStatus { optimal, infeasible, unbounded };

struct SolveResult {
    SolveStatus status = SolveStatus::infeasible;
    double objective = 0.0;
    std::vector<double> x;
    double seconds = 0.0;
    int iterations = 0;   // simplex pivots (summed over B&B nodes)
    long nodes = 0;       // B&B nodes processed (1 for plain LPs)
};

struct SolverOptions {
    double pivot_tol = 1e-10;
    double feas_tol = 1e-8;
    double int_tol = 1e-9;
    long max_nodes = 1000000;
    int max_iterations = 200000;
};

// Bounded-variable simplex (full tableau, Bland's rule, two-phase with
// artificials). Optimality is certified by reduced-cost signs; the returned
// point is re-verified against every row and bound at feas_tol.
SolveResult solve_lp(const LpProblem& p, const SolverOptions& opts = {});

// Exact best-first branch and bound over the binary variables; no
// optimality gap is tolerated beyond LP tolerances.
SolveResult solve_milp(const MilpProblem& p, const SolverOptions& opts = {});

// Text dump in LP-format style for cross-checks with external solvers.
std::string dump_lp(const LpProblem& p);
std::string dump_milp(const MilpProblem& p);

}  // namespace voltrisk

#endif  // VOLTRISK_SOLVER_HPP_
