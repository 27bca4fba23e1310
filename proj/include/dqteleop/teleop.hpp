#pragma once

#include "dqteleop/controller.hpp"

namespace dqteleop {

/// Relative motion of one master device since its previous command, in the master frame.
struct MasterCommand {
    int master_id = 0;
    bool clutch = false;
    Vector3 dt = Vector3::Zero();
    Quaternion dr = quat::one;
};

/// Relative clutch mapping of master motion onto a slave target.
///
/// `alignment` rotates master-frame vectors into the slave world frame. While
/// the clutch is engaged, t_d advances by MS times the aligned translation and
/// r_d is pre-multiplied by the aligned rotation. The master position is
/// tracked whether or not the clutch is engaged.
class MasterSlaveMapping {
public:
    MasterSlaveMapping() = default;
    MasterSlaveMapping(TaskTarget initial, Quaternion alignment, double motion_scaling);

    /// Throws std::invalid_argument when dr is not a unit quaternion.
    void apply(const MasterCommand& cmd);

    const TaskTarget& target() const { return target_; }
    bool engaged() const { return engaged_; }
    const Vector3& master_position() const { return master_position_; }
    const Quaternion& alignment() const { return alignment_; }
    double motion_scaling() const { return motion_scaling_; }
    void set_motion_scaling(double ms);
    void set_engaged(bool engaged) { engaged_ = engaged; }

    /// Slave-frame vector expressed in the master frame and divided by MS.
    Vector3 to_master(const Vector3& slave_vector) const;

private:
    TaskTarget target_;
    Quaternion alignment_ = quat::one;
    double motion_scaling_ = 1.0;
    bool engaged_ = false;
    Vector3 master_position_ = Vector3::Zero();
};

}  // namespace dqteleop
