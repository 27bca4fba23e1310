#include "dqteleop/teleop.hpp"

#include <stdexcept>

namespace dqteleop {

namespace {

Vector3 rotate(const Quaternion& r, const Vector3& v) { return vec3((r * Quaternion::pure(v) * r.conj()).im()); }

}  // namespace

MasterSlaveMapping::MasterSlaveMapping(TaskTarget initial, Quaternion alignment, double motion_scaling)
    : target_(initial), alignment_(alignment)
{
    if (!alignment_.is_unit()) {
        throw std::invalid_argument("master alignment must be a unit quaternion");
    }
    set_motion_scaling(motion_scaling);
}

void MasterSlaveMapping::set_motion_scaling(double ms)
{
    if (!(ms > 0.0)) {
        throw std::invalid_argument("motion scaling must be positive");
    }
    motion_scaling_ = ms;
}

void MasterSlaveMapping::apply(const MasterCommand& cmd)
{
    if (!cmd.dr.is_unit(1e-6)) {
        throw std::invalid_argument("master rotation delta must be a unit quaternion");
    }
    engaged_ = cmd.clutch;
    master_position_ += cmd.dt;
    if (!engaged_) {
        return;
    }
    target_.t_d += motion_scaling_ * rotate(alignment_, cmd.dt);
    const Quaternion world_dr = alignment_ * cmd.dr * alignment_.conj();
    target_.r_d = (world_dr * target_.r_d).normalized();
}

Vector3 MasterSlaveMapping::to_master(const Vector3& slave_vector) const
{
    return rotate(alignment_.conj(), slave_vector) / motion_scaling_;
}

}  // namespace dqteleop
