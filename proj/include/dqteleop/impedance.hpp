#pragma once

#include "dqteleop/teleop.hpp"

namespace dqteleop {

struct ImpedanceConfig {
    double eta_f = 350.0;  ///< stiffness, N/m
    double eta_v = 10.0;   ///< viscosity, N s/m

    void validate() const;
};

/// Gamma = -eta_f e - eta_v v, in the master frame.
Vector3 master_force(const Vector3& master_error, const Vector3& master_velocity, const ImpedanceConfig& cfg);

/// Lead of the master over the slave seen from the master: the slave's
/// (t_d - t) rotated into the master frame and divided by MS. With this sign
/// the force pushes the master back toward the slave.
Vector3 master_error(const MasterSlaveMapping& mapping, const Vector3& t, const Vector3& t_d);

}  // namespace dqteleop
