#include "dqteleop/vfi.hpp"

#include <stdexcept>

namespace dqteleop {

double distance_error(const DistanceResult& res, const ConstraintSpec& spec)
{
    return spec.zone == Zone::restricted ? res.d - spec.d_safe : spec.d_safe - res.d;
}

ConstraintRow restricted_zone_row(const DistanceResult& res, const ConstraintSpec& spec)
{
    const double zeta_safe = res.residual - spec.d_safe_rate;
    const double d_tilde = res.d - spec.d_safe;
    return {-res.jacobian, spec.eta_d * d_tilde + zeta_safe, std::nullopt};
}

ConstraintRow safe_zone_row(const DistanceResult& res, const ConstraintSpec& spec)
{
    const double zeta_safe = res.residual - spec.d_safe_rate;
    const double d_tilde = spec.d_safe - res.d;
    return {res.jacobian, spec.eta_d * d_tilde - zeta_safe, std::nullopt};
}

ConstraintRow vfi_row(const DistanceResult& res, const ConstraintSpec& spec)
{
    return spec.zone == Zone::restricted ? restricted_zone_row(res, spec) : safe_zone_row(res, spec);
}

std::vector<ConstraintRow> joint_limit_rows(const JointState& state, double eta_q, std::size_t robot)
{
    const auto n = state.q.size();
    if (state.q_min.size() != n || state.q_max.size() != n || state.qd_max.size() != n) {
        throw std::invalid_argument("joint_limit_rows: limit vectors do not match q");
    }
    std::vector<ConstraintRow> rows;
    rows.reserve(static_cast<std::size_t>(4 * n));
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
        e(i) = 1.0;
        rows.push_back({-e, eta_q * (state.q(i) - state.q_min(i)), robot});
        rows.push_back({e, eta_q * (state.q_max(i) - state.q(i)), robot});
        rows.push_back({-e, state.qd_max(i), robot});
        rows.push_back({e, state.qd_max(i), robot});
    }
    return rows;
}

JointLayout::JointLayout(std::vector<int> dofs) : dofs_(std::move(dofs))
{
    offsets_.reserve(dofs_.size());
    for (const int n : dofs_) {
        if (n <= 0) {
            throw std::invalid_argument("JointLayout: every robot needs at least one joint");
        }
        offsets_.push_back(total_);
        total_ += n;
    }
}

LinearInequalities assemble(const std::vector<ConstraintRow>& rows, const JointLayout& layout)
{
    const auto r = static_cast<Eigen::Index>(rows.size());
    LinearInequalities out{MatrixXd::Zero(r, layout.total()), VectorXd::Zero(r)};
    for (Eigen::Index i = 0; i < r; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (row.robot) {
            if (*row.robot >= layout.robots()) {
                throw std::invalid_argument("constraint row refers to robot " + std::to_string(*row.robot) +
                                            " outside the layout");
            }
            if (row.coeffs.size() != layout.dof(*row.robot)) {
                throw std::invalid_argument("constraint row width does not match robot " +
                                            std::to_string(*row.robot));
            }
            out.W.block(i, layout.offset(*row.robot), 1, row.coeffs.size()) = row.coeffs;
        } else {
            if (row.coeffs.size() != layout.total()) {
                throw std::invalid_argument("stacked constraint row width does not match the layout");
            }
            out.W.row(i) = row.coeffs;
        }
        out.w(i) = row.bound;
    }
    return out;
}

}  // namespace dqteleop
