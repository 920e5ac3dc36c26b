#ifndef LCED_PARAMETRIC_HPP
#define LCED_PARAMETRIC_HPP

#include <Eigen/Dense>
#include <vector>

#include "lced/lp.hpp"

namespace lced {

/// Standard equality form  min (c_const + theta*c_param)' x,  A x = b,
/// x >= 0, for theta in [0, 1]. Built from a bi-objective LPInstance by
/// adding slacks for inequality rows, shifting finite lower bounds to zero,
/// splitting free variables, and turning finite upper bounds into rows.
/// Eliminated or shifted variables contribute the affine objective offset
/// (off_const + theta*off_param).
struct ParametricForm {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd c_const;  // objective at theta = 0 (second objective)
    Eigen::VectorXd c_param;  // slope: c_cost - c_const
    Eigen::VectorXd c_cost;   // exact objective vector at theta = 1
    double off_const = 0.0;
    double off_param = 0.0;

    int orig_vars = 0;
    std::vector<int> col_orig;       // original variable per column, -1 for slacks
    std::vector<double> col_coeff;   // +1 / -1 contribution of the column
    Eigen::VectorXd orig_shift;      // constant part per original variable

    int num_cols() const { return static_cast<int>(A.cols()); }
    int num_rows() const { return static_cast<int>(A.rows()); }

    /// Map a standard-form point back to the original variable space.
    Eigen::VectorXd to_original(const Eigen::VectorXd& x_std) const;

    /// Scalarized objective value of a standard-form point, offsets included.
    double objective_at(double theta, const Eigen::VectorXd& x_std) const;

    /// The standard-form LP at a fixed parameter value. The objective is the
    /// convex combination (1-theta)*c_const + theta*c_cost so the endpoint
    /// objectives are reproduced exactly.
    LPInstance lp_at(double theta) const;
};

/// Interval of the parameter over which one optimal basis stays optimal.
/// The vertex solution is constant on the region and the optimal value is
/// value(theta) = alpha + beta*theta. The primal point is recovered from the
/// active set as the basic solution of the active-column system, nonbasic
/// columns at zero.
struct CriticalRegion {
    double theta_lo = 0.0;
    double theta_hi = 1.0;
    std::vector<int> active_set;  // basic standard-form columns
    Eigen::VectorXd x_std;
    Eigen::VectorXd x;  // original variable space
    double alpha = 0.0;
    double beta = 0.0;

    double value(double theta) const { return alpha + beta * theta; }
};

struct ParametricOptions {
    double tol = 1e-9;
    double eps_step = 1e-9;   // sweep step past a region boundary
    int max_regions = 10000;
};

/// Rewrite a bi-objective LP (cost vector, second objective vector) over the
/// constraints of `base` into standard parametric form with theta in [0, 1];
/// theta = 1 recovers the pure cost objective, theta = 0 the second one.
ParametricForm to_parametric_form(const LPInstance& base, const Eigen::VectorXd& cost_vec,
                                  const Eigen::VectorXd& second_vec);

/// Critical region around theta0: solve at theta0, then widen the interval
/// as far as every nonbasic reduced-cost line stays nonnegative. A theta0 on
/// a region boundary resolves to the region on its +theta side.
CriticalRegion critical_region(const ParametricForm& form, double theta0,
                               const ParametricOptions& opt = {});

/// Left-to-right sweep of [0, 1]: disjoint interiors, shared boundary
/// points, adjacent regions with identical vertex solutions merged.
std::vector<CriticalRegion> enumerate_regions(const ParametricForm& form,
                                              const ParametricOptions& opt = {});

}  // namespace lced

#endif
