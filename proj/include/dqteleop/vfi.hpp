#pragma once

#include "dqteleop/geometry.hpp"

#include <optional>
#include <vector>

namespace dqteleop {

enum class Zone { restricted, safe };

/// Safe distance d_safe(t) = d_safe + d_safe_rate * t, damped with gain eta_d.
struct ConstraintSpec {
    Zone zone = Zone::restricted;
    double d_safe = 0.0;
    double d_safe_rate = 0.0;
    double eta_d = 1.0;
};

/// One row of W qdot <= w. When `robot` is set, `coeffs` covers only that
/// robot's joints; otherwise it spans the whole stacked joint vector.
struct ConstraintRow {
    Eigen::RowVectorXd coeffs;
    double bound = 0.0;
    std::optional<std::size_t> robot;
};

/// Distance error used by the damper: d - d_safe (restricted) or d_safe - d (safe).
double distance_error(const DistanceResult& res, const ConstraintSpec& spec);

/// -J_d qdot <= eta_d (d - d_safe) + zeta - d_safe_rate
ConstraintRow restricted_zone_row(const DistanceResult& res, const ConstraintSpec& spec);
/// J_d qdot <= eta_d (d_safe - d) - (zeta - d_safe_rate)
ConstraintRow safe_zone_row(const DistanceResult& res, const ConstraintSpec& spec);
/// Dispatches on spec.zone.
ConstraintRow vfi_row(const DistanceResult& res, const ConstraintSpec& spec);

/// Per joint: -qdot <= eta_q (q - q_min), qdot <= eta_q (q_max - q), and the
/// velocity caps -qdot <= qd_max, qdot <= qd_max. Rows are local to `robot`.
std::vector<ConstraintRow> joint_limit_rows(const JointState& state, double eta_q, std::size_t robot = 0);

/// Column layout of the stacked joint vector.
class JointLayout {
public:
    JointLayout() = default;
    explicit JointLayout(std::vector<int> dofs);

    std::size_t robots() const { return dofs_.size(); }
    int dof(std::size_t robot) const { return dofs_.at(robot); }
    int offset(std::size_t robot) const { return offsets_.at(robot); }
    int total() const { return total_; }

private:
    std::vector<int> dofs_;
    std::vector<int> offsets_;
    int total_ = 0;
};

struct LinearInequalities {
    MatrixXd W;
    VectorXd w;
};

/// Embeds rows into the stacked layout with zero padding. Throws std::invalid_argument
/// when a row does not match the layout.
LinearInequalities assemble(const std::vector<ConstraintRow>& rows, const JointLayout& layout);

}  // namespace dqteleop
