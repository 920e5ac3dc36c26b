#include "lced/parametric.hpp"

#include <algorithm>
#include <cmath>

#include "lced/errors.hpp"
#include "lced/util.hpp"

namespace lced {

Eigen::VectorXd ParametricForm::to_original(const Eigen::VectorXd& x_std) const {
    Eigen::VectorXd x = orig_shift;
    for (int j = 0; j < num_cols(); ++j) {
        if (col_orig[j] >= 0) x[col_orig[j]] += col_coeff[j] * x_std[j];
    }
    return x;
}

double ParametricForm::objective_at(double theta, const Eigen::VectorXd& x_std) const {
    double lin = (1.0 - theta) * c_const.dot(x_std) + theta * c_cost.dot(x_std);
    return lin + off_const + theta * off_param;
}

LPInstance ParametricForm::lp_at(double theta) const {
    LPInstance lp = LPInstance::with_vars(num_cols());
    lp.c = (1.0 - theta) * c_const + theta * c_cost;
    lp.H = A;
    lp.h = b;
    lp.lo.setZero();
    return lp;
}

ParametricForm to_parametric_form(const LPInstance& base, const Eigen::VectorXd& cost_vec,
                                  const Eigen::VectorXd& second_vec) {
    base.validate();
    const int n = base.num_vars();
    if (cost_vec.size() != n || second_vec.size() != n)
        throw std::invalid_argument("objective vectors must match the LP variable space");

    ParametricForm f;
    f.orig_vars = n;
    f.orig_shift = Eigen::VectorXd::Zero(n);

    // column plan per original variable
    struct UpperRow {
        int col;
        double rhs;
    };
    std::vector<UpperRow> upper_rows;
    std::vector<std::pair<int, double>> cols;  // (orig, coeff) for structural columns
    for (int j = 0; j < n; ++j) {
        double lo = base.lo[j], hi = base.hi[j];
        if (lo == hi) {
            f.orig_shift[j] = lo;  // eliminated
        } else if (std::isfinite(lo)) {
            f.orig_shift[j] = lo;
            cols.push_back({j, 1.0});
            if (std::isfinite(hi))
                upper_rows.push_back({static_cast<int>(cols.size()) - 1, hi - lo});
        } else if (std::isfinite(hi)) {
            f.orig_shift[j] = hi;  // x = hi - x'
            cols.push_back({j, -1.0});
        } else {
            cols.push_back({j, 1.0});  // free split
            cols.push_back({j, -1.0});
        }
    }

    const int n_struct = static_cast<int>(cols.size());
    const int m_eq = base.num_eq();
    const int m_in = base.num_ineq();
    const int m_up = static_cast<int>(upper_rows.size());
    const int rows = m_eq + m_in + m_up;
    const int total = n_struct + m_in + m_up;

    f.A.setZero(rows, total);
    f.b.setZero(rows);
    f.col_orig.assign(total, -1);
    f.col_coeff.assign(total, 1.0);

    for (int k = 0; k < n_struct; ++k) {
        auto [j, coeff] = cols[k];
        f.col_orig[k] = j;
        f.col_coeff[k] = coeff;
        if (m_eq > 0) f.A.block(0, k, m_eq, 1) = coeff * base.H.col(j);
        if (m_in > 0) f.A.block(m_eq, k, m_in, 1) = coeff * base.G.col(j);
    }
    if (m_eq > 0) f.b.head(m_eq) = base.h - base.H * f.orig_shift;
    if (m_in > 0) f.b.segment(m_eq, m_in) = base.g - base.G * f.orig_shift;
    for (int i = 0; i < m_in; ++i) f.A(m_eq + i, n_struct + i) = 1.0;  // slack
    for (int r = 0; r < m_up; ++r) {
        f.A(m_eq + m_in + r, upper_rows[r].col) = 1.0;
        f.A(m_eq + m_in + r, n_struct + m_in + r) = 1.0;  // bound slack
        f.b[m_eq + m_in + r] = upper_rows[r].rhs;
    }

    f.c_cost.setZero(total);
    f.c_const.setZero(total);
    for (int k = 0; k < n_struct; ++k) {
        auto [j, coeff] = cols[k];
        f.c_cost[k] = coeff * cost_vec[j];
        f.c_const[k] = coeff * second_vec[j];
    }
    f.c_param = f.c_cost - f.c_const;
    double off_cost = cost_vec.dot(f.orig_shift);
    f.off_const = second_vec.dot(f.orig_shift);
    f.off_param = off_cost - f.off_const;
    return f;
}

namespace {

/// Reduced-cost lines rc(theta) = rc_const + theta*rc_param for all columns
/// under the basis of `sol`, from a fresh factorization of the basis matrix.
/// Basis entries >= num_cols() are residual artificials on redundant rows;
/// their columns are unit vectors and their costs zero.
struct RcLines {
    Eigen::VectorXd rc_const, rc_param;
    Eigen::VectorXd scale;  // magnitude of the terms entering each rc value
    Eigen::VectorXd x_std;
};

RcLines reduced_cost_lines(const ParametricForm& form, const LPSolution& sol) {
    const int m = form.num_rows();
    const int nc = form.num_cols();
    Eigen::MatrixXd B(m, m);
    Eigen::VectorXd cb_const = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd cb_param = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        int j = sol.basis[i];
        if (j < nc) {
            B.col(i) = form.A.col(j);
            cb_const[i] = form.c_const[j];
            cb_param[i] = form.c_param[j];
        } else {
            B.col(i) = Eigen::VectorXd::Unit(m, j - nc);
        }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B.transpose());
    Eigen::VectorXd w_const = lu.solve(cb_const);
    Eigen::VectorXd w_param = lu.solve(cb_param);
    if (!w_const.allFinite() || !w_param.allFinite())
        throw NumericalError("singular basis in critical-region extraction");

    RcLines out;
    out.rc_const = form.c_const - form.A.transpose() * w_const;
    out.rc_param = form.c_param - form.A.transpose() * w_param;
    Eigen::VectorXd w_abs = w_const.cwiseAbs() + w_param.cwiseAbs();
    out.scale = form.c_const.cwiseAbs() + form.c_param.cwiseAbs() +
                form.A.cwiseAbs().transpose() * w_abs;
    out.x_std = sol.x;
    return out;
}

CriticalRegion region_from_solution(const ParametricForm& form, const LPSolution& sol,
                                    double theta0, const ParametricOptions& opt) {
    RcLines lines = reduced_cost_lines(form, sol);
    const int nc = form.num_cols();
    std::vector<bool> basic(nc, false);
    for (int j : sol.basis)
        if (j < nc) basic[j] = true;

    double lo = 0.0, hi = 1.0;
    for (int j = 0; j < nc; ++j) {
        if (basic[j]) continue;
        double rc0 = lines.rc_const[j];
        double rc1 = rc0 + lines.rc_param[j];
        // per-column noise floor: split twins and degenerate ties produce
        // reduced-cost lines that are zero up to rounding and must not
        // generate spurious boundaries
        double noise = 1e-12 * (1.0 + lines.scale[j]);
        if (rc0 >= -noise && rc1 >= -noise) continue;  // nonnegative on [0, 1]
        double slope = lines.rc_param[j];
        if (std::abs(slope) <= noise) continue;
        double crossing = -rc0 / slope;
        if (slope > 0.0) {
            lo = std::max(lo, crossing);  // rc >= 0 needs theta >= crossing
        } else {
            hi = std::min(hi, crossing);
        }
    }
    // the basis is optimal at theta0, so the interval must contain it up to
    // reduced-cost tolerance noise
    lo = std::min(lo, theta0);
    hi = std::max(hi, theta0);
    lo = std::clamp(lo, 0.0, 1.0);
    hi = std::clamp(hi, 0.0, 1.0);

    CriticalRegion region;
    region.theta_lo = lo;
    region.theta_hi = hi;
    region.active_set = sol.basis;
    region.x_std = lines.x_std;
    region.x = form.to_original(lines.x_std);
    region.alpha = form.c_const.dot(lines.x_std) + form.off_const;
    region.beta = form.c_param.dot(lines.x_std) + form.off_param;
    (void)opt;
    return region;
}

LPSolution solve_at(const ParametricForm& form, double theta) {
    // a tight dual tolerance keeps a basis from staying "optimal enough"
    // past its region boundary, which would smear the boundary by
    // tol_opt / |reduced-cost slope|
    SimplexOptions opt;
    opt.tol_opt = 1e-12;
    LPSolution sol = simplex_solve(form.lp_at(theta), std::nullopt, opt);
    if (sol.status != SolveStatus::optimal)
        throw InfeasibleError("parametric form " + to_string(sol.status) + " at theta = " +
                              format_value(theta));
    return sol;
}

}  // namespace

CriticalRegion critical_region(const ParametricForm& form, double theta0,
                               const ParametricOptions& opt) {
    if (theta0 < 0.0 || theta0 > 1.0)
        throw std::invalid_argument("theta0 outside [0, 1]");
    CriticalRegion region = region_from_solution(form, solve_at(form, theta0), theta0, opt);
    if (region.theta_hi - theta0 < 1e-12 && theta0 < 1.0) {
        // theta0 sits on this region's right edge: return the +theta side
        double probe = std::min(theta0 + opt.eps_step, 1.0);
        CriticalRegion right = region_from_solution(form, solve_at(form, probe), probe, opt);
        right.theta_lo = std::min(right.theta_lo, theta0);
        return right;
    }
    return region;
}

std::vector<CriticalRegion> enumerate_regions(const ParametricForm& form,
                                              const ParametricOptions& opt) {
    std::vector<CriticalRegion> regions;
    double theta = 0.0;
    int steps = 0;
    while (true) {
        if (static_cast<int>(regions.size()) > opt.max_regions || ++steps > 4 * opt.max_regions)
            throw NumericalError("region enumeration exceeded max_regions = " +
                                 std::to_string(opt.max_regions));
        CriticalRegion r = region_from_solution(form, solve_at(form, theta), theta, opt);
        double prev_hi = regions.empty() ? 0.0 : regions.back().theta_hi;
        r.theta_lo = prev_hi;  // tile exactly; boundaries come from the ratios
        r.theta_hi = std::max(r.theta_hi, std::min(prev_hi + opt.eps_step, 1.0));

        bool merged = false;
        if (!regions.empty()) {
            CriticalRegion& last = regions.back();
            double scale = 1.0 + last.x.cwiseAbs().maxCoeff();
            if ((last.x - r.x).cwiseAbs().maxCoeff() <= 1e-7 * scale) {
                last.theta_hi = std::max(last.theta_hi, r.theta_hi);
                merged = true;
            }
        }
        if (!merged) regions.push_back(std::move(r));

        double hi = regions.back().theta_hi;
        if (hi >= 1.0 - 1e-12) {
            regions.back().theta_hi = 1.0;
            break;
        }
        theta = std::min(hi + opt.eps_step, 1.0);
    }
    if (!regions.empty()) regions.front().theta_lo = 0.0;
    return regions;
}

}  // namespace lced
