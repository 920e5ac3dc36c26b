#ifndef LCED_LP_HPP
#define LCED_LP_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace lced {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// min c'x  s.t.  G x <= g,  H x == h,  lo <= x <= hi  (+-inf allowed).
struct LPInstance {
    Eigen::VectorXd c;
    Eigen::MatrixXd G;
    Eigen::VectorXd g;
    Eigen::MatrixXd H;
    Eigen::VectorXd h;
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
    std::vector<std::string> var_names;  // optional, diagnostics only

    int num_vars() const { return static_cast<int>(c.size()); }
    int num_ineq() const { return static_cast<int>(g.size()); }
    int num_eq() const { return static_cast<int>(h.size()); }

    /// Throws std::invalid_argument on dimension mismatch or lo > hi.
    void validate() const;

    void add_ineq(const Eigen::VectorXd& row, double rhs);

    static LPInstance with_vars(int n);
};

enum class SolveStatus { optimal, infeasible, unbounded };

std::string to_string(SolveStatus status);

/// Basis indices: [0, n) structural variables, [n, n + num_ineq) slack of
/// inequality row (index - n). Indices beyond that mark residual artificials
/// kept basic at zero on redundant rows.
struct LPSolution {
    SolveStatus status = SolveStatus::infeasible;
    Eigen::VectorXd x;
    double objective_value = 0.0;
    std::vector<int> basis;
    Eigen::VectorXd duals;          // per row: eq rows first, then ineq rows
    Eigen::VectorXd reduced_costs;  // structural variables
    int iterations = 0;
};

struct SimplexOptions {
    double tol_feas = 1e-9;  // primal feasibility on scaled data
    double tol_opt = 1e-9;   // dual feasibility (reduced-cost sign) on scaled data
    int stall_limit = 50;    // degenerate pivots before switching to Bland's rule
    int refactor_every = 100;
    int max_iters = 0;  // 0 = automatic limit from problem size
    bool scale = true;  // geometric-mean row/column scaling
};

/// Dense-basis revised simplex, Dantzig pricing with Bland fallback after a
/// degenerate stall. Statuses infeasible/unbounded are results, not errors;
/// NumericalError signals basis breakdown or an iteration blowup.
LPSolution simplex_solve(const LPInstance& lp,
                         const std::optional<std::vector<int>>& warm_basis = std::nullopt,
                         const SimplexOptions& options = {});

/// Fixed-format text dump for bug reports.
void dump_lp(const LPInstance& lp, std::ostream& out);

}  // namespace lced

#endif
