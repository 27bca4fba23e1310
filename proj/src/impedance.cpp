#include "dqteleop/impedance.hpp"

#include <stdexcept>

namespace dqteleop {

void ImpedanceConfig::validate() const
{
    if (!(eta_f > 0.0) || !(eta_v > 0.0)) {
        throw std::invalid_argument("impedance: eta_f and eta_v must be positive");
    }
}

Vector3 master_force(const Vector3& master_error, const Vector3& master_velocity, const ImpedanceConfig& cfg)
{
    return -cfg.eta_f * master_error - cfg.eta_v * master_velocity;
}

Vector3 master_error(const MasterSlaveMapping& mapping, const Vector3& t, const Vector3& t_d)
{
    return mapping.to_master(t_d - t);
}

}  // namespace dqteleop
