#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace dqteleop {

/// min 1/2 x'Hx + f'x  subject to  W x <= w
struct QpProblem {
    Eigen::MatrixXd H;
    Eigen::VectorXd f;
    Eigen::MatrixXd W;
    Eigen::VectorXd w;
};

enum class QpStatus { optimal, infeasible, max_iter };

std::string_view to_string(QpStatus status);

struct QpSolution {
    Eigen::VectorXd x;
    /// One multiplier per row of W, zero for inactive rows.
    Eigen::VectorXd multipliers;
    QpStatus status = QpStatus::optimal;
    int iterations = 0;
    /// max of stationarity, primal violation and complementarity (infinity norms).
    double kkt_residual = 0.0;
    std::vector<Eigen::Index> active_set;
    /// Set when Cholesky of H failed and the ridge was added.
    bool ridge_applied = false;
    /// For infeasible problems: y >= 0 with y'W = 0 and y'w < 0.
    Eigen::VectorXd farkas;
};

/// Dense dual active-set solver (Goldfarb-Idnani). Holds the previous active set
/// and uses it to order constraint additions; the result does not depend on it.
class QpSolver {
public:
    QpSolution solve(const QpProblem& problem);

    void set_warm_start(bool enabled) { warm_start_ = enabled; }
    void reset() { previous_active_.clear(); }
    const std::vector<Eigen::Index>& previous_active_set() const { return previous_active_; }

private:
    bool warm_start_ = true;
    std::vector<Eigen::Index> previous_active_;
};

/// Cold-start convenience wrapper.
QpSolution solve_qp(const QpProblem& problem);

/// KKT residual of (x, multipliers) for the problem.
double kkt_residual(const QpProblem& problem, const Eigen::VectorXd& x, const Eigen::VectorXd& multipliers);

struct FeasibilityResult {
    bool feasible = true;
    /// A point satisfying W x <= w when feasible.
    Eigen::VectorXd witness;
    /// Largest violation max(W x - w) at the witness (<= 0 up to rounding when feasible).
    double max_violation = 0.0;
    /// Nonnegative row combination with y'W = 0 and y'w < 0 when infeasible.
    Eigen::VectorXd certificate;
};

FeasibilityResult is_feasible(const Eigen::MatrixXd& W, const Eigen::VectorXd& w);

}  // namespace dqteleop
