#include "lced/lp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "lced/errors.hpp"
#include "lced/util.hpp"

namespace lced {

void LPInstance::validate() const {
    const int n = num_vars();
    auto dim_check = [&](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("LPInstance: ") + what);
    };
    dim_check(G.rows() == g.size() && (G.size() == 0 || G.cols() == n), "G/g dimensions");
    dim_check(H.rows() == h.size() && (H.size() == 0 || H.cols() == n), "H/h dimensions");
    dim_check(lo.size() == n && hi.size() == n, "bounds dimensions");
    dim_check(var_names.empty() || static_cast<int>(var_names.size()) == n, "var_names size");
    for (int j = 0; j < n; ++j)
        dim_check(lo[j] <= hi[j], "lo > hi for some variable");
}

void LPInstance::add_ineq(const Eigen::VectorXd& row, double rhs) {
    G.conservativeResize(G.rows() + 1, num_vars());
    G.row(G.rows() - 1) = row.transpose();
    g.conservativeResize(g.size() + 1);
    g[g.size() - 1] = rhs;
}

LPInstance LPInstance::with_vars(int n) {
    LPInstance lp;
    lp.c = Eigen::VectorXd::Zero(n);
    lp.G.resize(0, n);
    lp.g.resize(0);
    lp.H.resize(0, n);
    lp.h.resize(0);
    lp.lo = Eigen::VectorXd::Constant(n, -kInf);
    lp.hi = Eigen::VectorXd::Constant(n, kInf);
    return lp;
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
    }
    return "?";
}

namespace {

enum class VarState { basic, at_lower, at_upper, free_nb, fixed };

/// Revised simplex on the computational form  A x = b,  lo <= x <= hi with
/// columns [structural | ineq slacks | artificials]. The basis inverse is
/// kept explicitly and rebuilt from an LU factorization every
/// `refactor_every` pivots.
class Simplex {
public:
    Simplex(const LPInstance& lp, const SimplexOptions& opt) : lp_(lp), opt_(opt) {
        n_ = lp.num_vars();
        mh_ = lp.num_eq();
        mg_ = lp.num_ineq();
        m_ = mh_ + mg_;
        ns_ = n_ + mg_;       // structural + slack
        ncols_ = ns_ + m_;    // + artificials

        A_.setZero(m_, ncols_);
        if (mh_ > 0) A_.block(0, 0, mh_, n_) = lp.H;
        if (mg_ > 0) {
            A_.block(mh_, 0, mg_, n_) = lp.G;
            A_.block(mh_, n_, mg_, mg_).setIdentity();
        }
        b_.resize(m_);
        if (mh_ > 0) b_.head(mh_) = lp.h;
        if (mg_ > 0) b_.tail(mg_) = lp.g;

        lo_.setConstant(ncols_, 0.0);
        hi_.setConstant(ncols_, kInf);
        lo_.head(n_) = lp.lo;
        hi_.head(n_) = lp.hi;

        if (opt_.scale) apply_scaling();

        max_iters_ = opt_.max_iters > 0 ? opt_.max_iters : 10000 + 200 * (m_ + ns_);
    }

    LPSolution run(const std::optional<std::vector<int>>& warm_basis) {
        bool warm_ok = warm_basis && try_warm_start(*warm_basis);
        if (!warm_ok) {
            cold_start();
            Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(ncols_);
            phase1_cost.segment(ns_, m_).setOnes();
            SolveStatus st = iterate(phase1_cost, /*phase1=*/true);
            if (st != SolveStatus::optimal)
                throw NumericalError("phase 1 ended " + to_string(st));
            double infeas = 0.0;
            for (int k = 0; k < m_; ++k) infeas += xval_[ns_ + k];
            double tol = opt_.tol_feas * m_ * (1.0 + b_.lpNorm<Eigen::Infinity>());
            if (infeas > tol) return make_solution(SolveStatus::infeasible);
            drive_out_artificials();
        }
        for (int j = ns_; j < ncols_; ++j) {  // artificials may not re-enter
            if (state_[j] != VarState::basic) {
                state_[j] = VarState::fixed;
                lo_[j] = hi_[j] = 0.0;
                xval_[j] = 0.0;
            }
        }
        Eigen::VectorXd cost = Eigen::VectorXd::Zero(ncols_);
        cost.head(n_) = scaled_c_;
        SolveStatus st = iterate(cost, /*phase1=*/false);
        return make_solution(st);
    }

private:
    // --- setup -----------------------------------------------------------

    void apply_scaling() {
        row_scale_.setOnes(m_);
        col_scale_.setOnes(ns_);
        auto pow2 = [](double v) {
            if (v <= 0.0 || !std::isfinite(v)) return 1.0;
            return std::ldexp(1.0, -static_cast<int>(std::lround(std::log2(v))));
        };
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < m_; ++i) {
                double mx = 0.0, mn = kInf;
                for (int j = 0; j < ns_; ++j) {
                    double v = std::abs(A_(i, j));
                    if (v > 0) {
                        mx = std::max(mx, v);
                        mn = std::min(mn, v);
                    }
                }
                if (mx > 0) {
                    double s = pow2(std::sqrt(mx * mn));
                    A_.row(i).head(ns_) *= s;
                    row_scale_[i] *= s;
                }
            }
            for (int j = 0; j < ns_; ++j) {
                double mx = 0.0, mn = kInf;
                for (int i = 0; i < m_; ++i) {
                    double v = std::abs(A_(i, j));
                    if (v > 0) {
                        mx = std::max(mx, v);
                        mn = std::min(mn, v);
                    }
                }
                if (mx > 0) {
                    double s = pow2(std::sqrt(mx * mn));
                    A_.col(j).head(m_) *= s;
                    col_scale_[j] *= s;
                }
            }
        }
        b_ = b_.cwiseProduct(row_scale_);
        for (int j = 0; j < ns_; ++j) {
            if (std::isfinite(lo_[j])) lo_[j] /= col_scale_[j];
            if (std::isfinite(hi_[j])) hi_[j] /= col_scale_[j];
        }
        scaled_c_ = lp_.c.cwiseProduct(col_scale_.head(n_));
    }

    void init_nonbasic_states() {
        state_.assign(ncols_, VarState::at_lower);
        xval_.setZero(ncols_);
        for (int j = 0; j < ns_; ++j) {
            if (lo_[j] == hi_[j]) {
                state_[j] = VarState::fixed;
                xval_[j] = lo_[j];
            } else if (std::isfinite(lo_[j])) {
                state_[j] = VarState::at_lower;
                xval_[j] = lo_[j];
            } else if (std::isfinite(hi_[j])) {
                state_[j] = VarState::at_upper;
                xval_[j] = hi_[j];
            } else {
                state_[j] = VarState::free_nb;
                xval_[j] = 0.0;
            }
        }
    }

    void cold_start() {
        init_nonbasic_states();
        Eigen::VectorXd resid = b_ - A_.leftCols(ns_) * xval_.head(ns_);
        basis_.resize(m_);
        Binv_.setZero(m_, m_);
        for (int i = 0; i < m_; ++i) {
            double sign = resid[i] < 0 ? -1.0 : 1.0;
            A_(i, ns_ + i) = sign;
            lo_[ns_ + i] = 0.0;
            hi_[ns_ + i] = kInf;
            basis_[i] = ns_ + i;
            state_[ns_ + i] = VarState::basic;
            xval_[ns_ + i] = std::abs(resid[i]);
            Binv_(i, i) = sign;
        }
        pivots_since_factor_ = 0;
    }

    bool try_warm_start(const std::vector<int>& warm) {
        if (static_cast<int>(warm.size()) != m_) return false;
        std::vector<int> cols;
        for (int j : warm) {
            if (j < 0 || j >= ns_) return false;  // artificial or out of range
            cols.push_back(j);
        }
        std::sort(cols.begin(), cols.end());
        if (std::adjacent_find(cols.begin(), cols.end()) != cols.end()) return false;

        init_nonbasic_states();
        for (int i = 0; i < m_; ++i) {  // artificial columns still needed later
            A_(i, ns_ + i) = 1.0;
            state_[ns_ + i] = VarState::fixed;
            lo_[ns_ + i] = hi_[ns_ + i] = 0.0;
        }
        basis_.assign(warm.begin(), warm.end());
        if (!refactor(false)) return false;
        for (int j : basis_) state_[j] = VarState::basic;
        recompute_basic_values();
        for (int i = 0; i < m_; ++i) {
            int j = basis_[i];
            if (xval_[j] < lo_[j] - 1e-7 || xval_[j] > hi_[j] + 1e-7) {
                // warm point not primal feasible; fall back to phase 1
                for (int k : basis_) state_[k] = VarState::at_lower;
                return false;
            }
        }
        pivots_since_factor_ = 0;
        return true;
    }

    // --- linear algebra ---------------------------------------------------

    bool refactor(bool throw_on_singular = true) {
        Eigen::MatrixXd B(m_, m_);
        for (int i = 0; i < m_; ++i) B.col(i) = A_.col(basis_[i]);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        Binv_ = lu.inverse();
        double check = m_ == 0 ? 0.0 : (B * Binv_ - Eigen::MatrixXd::Identity(m_, m_))
                                           .cwiseAbs()
                                           .maxCoeff();
        if (!std::isfinite(check) || check > 1e-6) {
            if (throw_on_singular)
                throw NumericalError("singular basis beyond refactorization");
            return false;
        }
        pivots_since_factor_ = 0;
        return true;
    }

    void recompute_basic_values() {
        Eigen::VectorXd xnb = xval_;
        for (int j : basis_) xnb[j] = 0.0;
        Eigen::VectorXd r = b_ - A_ * xnb;
        Eigen::VectorXd xb = Binv_ * r;
        for (int i = 0; i < m_; ++i) xval_[basis_[i]] = xb[i];
    }

    // --- pivoting ---------------------------------------------------------

    struct Entering {
        int col = -1;
        double dir = 1.0;
        double score = 0.0;
    };

    Entering price(const Eigen::VectorXd& cost, bool bland) const {
        Eigen::VectorXd w = Binv_.transpose() * cost_of_basis(cost);
        Entering best;
        for (int j = 0; j < ncols_; ++j) {
            VarState st = state_[j];
            if (st == VarState::basic || st == VarState::fixed) continue;
            double rc = cost[j] - A_.col(j).dot(w);
            double dir = 0.0, score = 0.0;
            if (st == VarState::at_lower && rc < -opt_.tol_opt) {
                dir = 1.0;
                score = -rc;
            } else if (st == VarState::at_upper && rc > opt_.tol_opt) {
                dir = -1.0;
                score = rc;
            } else if (st == VarState::free_nb && std::abs(rc) > opt_.tol_opt) {
                dir = rc > 0 ? -1.0 : 1.0;
                score = std::abs(rc);
            } else {
                continue;
            }
            if (bland) return {j, dir, score};
            if (score > best.score) best = {j, dir, score};
        }
        return best;
    }

    Eigen::VectorXd cost_of_basis(const Eigen::VectorXd& cost) const {
        Eigen::VectorXd cb(m_);
        for (int i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
        return cb;
    }

    SolveStatus iterate(const Eigen::VectorXd& cost, bool phase1) {
        constexpr double kPivTol = 1e-10;
        constexpr double kStepTol = 1e-11;
        int stall = 0;
        bool bland = false;
        while (true) {
            if (++iterations_ > max_iters_)
                throw NumericalError("simplex iteration limit exceeded");
            Entering e = price(cost, bland);
            if (e.col < 0) return SolveStatus::optimal;

            Eigen::VectorXd u = Binv_ * A_.col(e.col);
            double range = hi_[e.col] - lo_[e.col];  // inf for unbounded/free
            double t_best = std::isfinite(range) ? range : kInf;
            int leave_pos = -1;
            double leave_u = 0.0;
            for (int i = 0; i < m_; ++i) {
                double rate = -e.dir * u[i];  // change of basic i per unit step
                int k = basis_[i];
                double ti;
                if (rate > kPivTol && std::isfinite(hi_[k])) {
                    ti = (hi_[k] - xval_[k]) / rate;
                } else if (rate < -kPivTol && std::isfinite(lo_[k])) {
                    ti = (xval_[k] - lo_[k]) / (-rate);
                } else {
                    continue;
                }
                ti = std::max(ti, 0.0);  // drift guard
                double tie_tol = 1e-12 * (1.0 + t_best);
                if (ti < t_best - tie_tol || leave_pos < 0) {
                    if (ti <= t_best) {
                        t_best = ti;
                        leave_pos = i;
                        leave_u = u[i];
                    }
                } else if (ti <= t_best + tie_tol) {
                    bool take = bland ? basis_[i] < basis_[leave_pos]
                                      : std::abs(u[i]) > std::abs(leave_u);
                    if (take) {
                        t_best = std::min(t_best, ti);
                        leave_pos = i;
                        leave_u = u[i];
                    }
                }
            }

            if (!std::isfinite(t_best)) {
                if (phase1) throw NumericalError("unbounded phase-1 subproblem");
                return SolveStatus::unbounded;
            }

            if (leave_pos >= 0 && std::abs(u[leave_pos]) < 1e-11) {
                // pivot element too small to trust: rebuild the factors and
                // redo this iteration before touching any state
                if (++tiny_pivot_retries_ > 3)
                    throw NumericalError("singular basis beyond refactorization");
                refactor();
                recompute_basic_values();
                continue;
            }
            tiny_pivot_retries_ = 0;

            // apply step
            xval_[e.col] += e.dir * t_best;
            for (int i = 0; i < m_; ++i) xval_[basis_[i]] -= e.dir * u[i] * t_best;

            if (leave_pos < 0) {
                // entering variable moved to its opposite bound, basis unchanged
                state_[e.col] = e.dir > 0 ? VarState::at_upper : VarState::at_lower;
                xval_[e.col] = e.dir > 0 ? hi_[e.col] : lo_[e.col];
            } else {
                int leave_col = basis_[leave_pos];
                double rate = -e.dir * u[leave_pos];
                if (rate > 0) {
                    xval_[leave_col] = hi_[leave_col];
                    state_[leave_col] = lo_[leave_col] == hi_[leave_col] ? VarState::fixed
                                                                         : VarState::at_upper;
                } else {
                    xval_[leave_col] = lo_[leave_col];
                    state_[leave_col] = lo_[leave_col] == hi_[leave_col] ? VarState::fixed
                                                                         : VarState::at_lower;
                }
                if (leave_col >= ns_) {  // artificial leaves for good
                    state_[leave_col] = VarState::fixed;
                    lo_[leave_col] = hi_[leave_col] = 0.0;
                    xval_[leave_col] = 0.0;
                }
                update_binv(u, leave_pos);
                basis_[leave_pos] = e.col;
                state_[e.col] = VarState::basic;
                if (++pivots_since_factor_ >= opt_.refactor_every) {
                    refactor();
                    recompute_basic_values();
                }
            }

            if (t_best <= kStepTol) {
                if (++stall > opt_.stall_limit) bland = true;
            } else {
                stall = 0;
                bland = false;
            }
        }
    }

    void update_binv(const Eigen::VectorXd& u, int p) {
        Binv_.row(p) /= u[p];
        for (int i = 0; i < m_; ++i) {
            if (i == p) continue;
            double ui = u[i];
            if (ui != 0.0) Binv_.row(i) -= ui * Binv_.row(p);
        }
    }

    void drive_out_artificials() {
        for (int p = 0; p < m_; ++p) {
            if (basis_[p] < ns_) continue;
            Eigen::RowVectorXd row = Binv_.row(p) * A_.leftCols(ns_);
            int enter = -1;
            double best = 1e-7;
            for (int j = 0; j < ns_; ++j) {
                if (state_[j] == VarState::basic || state_[j] == VarState::fixed) continue;
                if (std::abs(row[j]) > best) {
                    best = std::abs(row[j]);
                    enter = j;
                }
            }
            if (enter < 0) {
                // redundant row: artificial stays basic at zero, pinned there
                lo_[basis_[p]] = hi_[basis_[p]] = 0.0;
                continue;
            }
            Eigen::VectorXd u = Binv_ * A_.col(enter);
            int old = basis_[p];
            update_binv(u, p);
            basis_[p] = enter;
            state_[enter] = VarState::basic;
            state_[old] = VarState::fixed;
            lo_[old] = hi_[old] = 0.0;
            xval_[old] = 0.0;
            if (++pivots_since_factor_ >= opt_.refactor_every) {
                refactor();
                recompute_basic_values();
            }
        }
    }

    // --- output -----------------------------------------------------------

    LPSolution make_solution(SolveStatus st) {
        LPSolution sol;
        sol.status = st;
        sol.iterations = iterations_;
        if (st == SolveStatus::infeasible) return sol;

        if (st == SolveStatus::optimal && m_ > 0) {
            refactor();
            recompute_basic_values();
        }

        sol.x.resize(n_);
        for (int j = 0; j < n_; ++j)
            sol.x[j] = xval_[j] * (opt_.scale ? col_scale_[j] : 1.0);
        if (st == SolveStatus::unbounded) {
            sol.objective_value = -kInf;
            return sol;
        }
        sol.objective_value = lp_.c.dot(sol.x);
        sol.basis = basis_;

        Eigen::VectorXd cost = Eigen::VectorXd::Zero(ncols_);
        cost.head(n_) = scaled_c_;
        Eigen::VectorXd w = Binv_.transpose() * cost_of_basis(cost);
        sol.duals.resize(m_);
        for (int i = 0; i < m_; ++i)
            sol.duals[i] = w[i] * (opt_.scale ? row_scale_[i] : 1.0);
        sol.reduced_costs.resize(n_);
        for (int j = 0; j < n_; ++j) {
            double rc = cost[j] - A_.col(j).dot(w);
            sol.reduced_costs[j] = rc / (opt_.scale ? col_scale_[j] : 1.0);
        }
        return sol;
    }

    const LPInstance& lp_;
    SimplexOptions opt_;
    int n_ = 0, mh_ = 0, mg_ = 0, m_ = 0, ns_ = 0, ncols_ = 0;
    Eigen::MatrixXd A_;
    Eigen::VectorXd b_, lo_, hi_, scaled_c_;
    Eigen::VectorXd row_scale_, col_scale_;
    Eigen::MatrixXd Binv_;
    std::vector<int> basis_;
    std::vector<VarState> state_;
    Eigen::VectorXd xval_;
    int pivots_since_factor_ = 0;
    int tiny_pivot_retries_ = 0;
    int iterations_ = 0;
    int max_iters_ = 0;
};

}  // namespace

LPSolution simplex_solve(const LPInstance& lp, const std::optional<std::vector<int>>& warm_basis,
                         const SimplexOptions& options) {
    lp.validate();
    SimplexOptions opt = options;
    Simplex solver(lp, opt);
    return solver.run(warm_basis);
}

void dump_lp(const LPInstance& lp, std::ostream& out) {
    out << "LP vars=" << lp.num_vars() << " ineq=" << lp.num_ineq() << " eq=" << lp.num_eq()
        << "\n";
    out << "c:";
    for (int j = 0; j < lp.num_vars(); ++j) out << " " << format_value(lp.c[j]);
    out << "\nbounds:\n";
    for (int j = 0; j < lp.num_vars(); ++j) {
        out << "  " << (lp.var_names.empty() ? "x" + std::to_string(j) : lp.var_names[j]) << " ["
            << format_value(lp.lo[j]) << ", " << format_value(lp.hi[j]) << "]\n";
    }
    for (int i = 0; i < lp.num_ineq(); ++i) {
        out << "ineq " << i << ":";
        for (int j = 0; j < lp.num_vars(); ++j) out << " " << format_value(lp.G(i, j));
        out << " <= " << format_value(lp.g[i]) << "\n";
    }
    for (int i = 0; i < lp.num_eq(); ++i) {
        out << "eq " << i << ":";
        for (int j = 0; j < lp.num_vars(); ++j) out << " " << format_value(lp.H(i, j));
        out << " == " << format_value(lp.h[i]) << "\n";
    }
}

}  // namespace lced
