#pragma once

#include <Eigen/Dense>

#include <iosfwd>

namespace dqteleop {

using Vector3 = Eigen::Vector3d;
using Vector4 = Eigen::Vector4d;
using Vector8 = Eigen::Matrix<double, 8, 1>;
using Matrix3 = Eigen::Matrix3d;
using Matrix4 = Eigen::Matrix4d;
using Matrix8 = Eigen::Matrix<double, 8, 8>;

/// Quaternion h = w + i x + j y + k z with the Hamilton product.
///
/// Translations are carried as pure quaternions (w == 0) whose vector part
/// has length units.
class Quaternion {
public:
    constexpr Quaternion() = default;
    constexpr Quaternion(double w, double x, double y, double z) : w_(w), x_(x), y_(y), z_(z) {}
    constexpr explicit Quaternion(double w) : w_(w) {}

    static Quaternion from_vec4(const Vector4& v) { return {v(0), v(1), v(2), v(3)}; }
    /// Pure quaternion with vector part v.
    static Quaternion pure(const Vector3& v) { return {0.0, v(0), v(1), v(2)}; }
    /// Unit quaternion rotating by `angle` about the unit `axis`.
    static Quaternion rotation(double angle, const Vector3& axis);

    constexpr double w() const { return w_; }
    constexpr double x() const { return x_; }
    constexpr double y() const { return y_; }
    constexpr double z() const { return z_; }

    Quaternion operator*(const Quaternion& b) const;
    Quaternion operator+(const Quaternion& b) const { return {w_ + b.w_, x_ + b.x_, y_ + b.y_, z_ + b.z_}; }
    Quaternion operator-(const Quaternion& b) const { return {w_ - b.w_, x_ - b.x_, y_ - b.y_, z_ - b.z_}; }
    Quaternion operator-() const { return {-w_, -x_, -y_, -z_}; }
    Quaternion operator*(double s) const { return {w_ * s, x_ * s, y_ * s, z_ * s}; }
    Quaternion& operator+=(const Quaternion& b) { return *this = *this + b; }
    bool operator==(const Quaternion&) const = default;

    Quaternion conj() const { return {w_, -x_, -y_, -z_}; }
    double norm() const;
    double squared_norm() const { return w_ * w_ + x_ * x_ + y_ * y_ + z_ * z_; }
    /// Throws std::domain_error on a zero quaternion.
    Quaternion normalized() const;

    /// Real part as a scalar quaternion.
    Quaternion re() const { return Quaternion(w_); }
    /// Imaginary (vector) part as a pure quaternion.
    Quaternion im() const { return {0.0, x_, y_, z_}; }

    bool is_pure() const { return w_ == 0.0; }
    bool is_unit(double tol = 1e-9) const;

private:
    double w_ = 0.0;
    double x_ = 0.0;
    double y_ = 0.0;
    double z_ = 0.0;
};

inline Quaternion operator*(double s, const Quaternion& h) { return h * s; }

namespace quat {
inline const Quaternion one{1.0, 0.0, 0.0, 0.0};
inline const Quaternion i{0.0, 1.0, 0.0, 0.0};
inline const Quaternion j{0.0, 0.0, 1.0, 0.0};
inline const Quaternion k{0.0, 0.0, 0.0, 1.0};
}  // namespace quat

Vector4 vec4(const Quaternion& h);
/// Vector part of a pure quaternion; throws std::invalid_argument("not a pure quaternion").
Vector3 vec3(const Quaternion& t);
/// Inner product of the coefficient vectors.
double dot(const Quaternion& a, const Quaternion& b);
/// Cross product of the vector parts, returned as a pure quaternion.
Quaternion cross(const Quaternion& a, const Quaternion& b);

/// vec4(a * b) == hamilton_plus4(a) * vec4(b)
Matrix4 hamilton_plus4(const Quaternion& a);
/// vec4(a * b) == hamilton_minus4(b) * vec4(a)
Matrix4 hamilton_minus4(const Quaternion& b);

/// diag(1, -1, -1, -1): vec4(h*) == conj_matrix4() * vec4(h).
Matrix4 conj_matrix4();

/// Dual quaternion x = P + eps D.
class DualQuaternion {
public:
    DualQuaternion() = default;
    DualQuaternion(const Quaternion& primary, const Quaternion& dual) : primary_(primary), dual_(dual) {}
    explicit DualQuaternion(const Quaternion& primary) : primary_(primary) {}

    static DualQuaternion identity() { return DualQuaternion(quat::one); }
    static DualQuaternion from_vec8(const Vector8& v);
    /// Pure translation 1 + eps t/2.
    static DualQuaternion translation(const Vector3& t);

    const Quaternion& primary() const { return primary_; }
    const Quaternion& dual() const { return dual_; }

    DualQuaternion operator*(const DualQuaternion& b) const;
    DualQuaternion operator+(const DualQuaternion& b) const { return {primary_ + b.primary_, dual_ + b.dual_}; }
    DualQuaternion operator-(const DualQuaternion& b) const { return {primary_ - b.primary_, dual_ - b.dual_}; }
    DualQuaternion operator*(double s) const { return {primary_ * s, dual_ * s}; }
    bool operator==(const DualQuaternion&) const = default;

    DualQuaternion conj() const { return {primary_.conj(), dual_.conj()}; }

    bool is_unit(double tol = 1e-9) const;
    /// Re-projects onto the unit dual quaternions: primary to unit norm and
    /// dual to the orthogonal complement of the primary.
    DualQuaternion normalized() const;

private:
    Quaternion primary_;
    Quaternion dual_;
};

Vector8 vec8(const DualQuaternion& x);

/// vec8(a * b) == hamilton_plus8(a) * vec8(b)
Matrix8 hamilton_plus8(const DualQuaternion& a);
/// vec8(a * b) == hamilton_minus8(b) * vec8(a)
Matrix8 hamilton_minus8(const DualQuaternion& b);
/// vec8(x*) == conj_matrix8() * vec8(x).
Matrix8 conj_matrix8();

/// Pose convention: x = r + eps (1/2) t r.
DualQuaternion pose_from_rt(const Quaternion& r, const Quaternion& t);

struct RotationTranslation {
    Quaternion rotation;
    Quaternion translation;
};

/// Inverse of pose_from_rt; t = 2 D(x) P(x)*. Throws std::invalid_argument on non-unit input.
RotationTranslation rt_from_pose(const DualQuaternion& x);

/// Translation of a unit pose as a 3-vector (no unit-norm check).
Vector3 translation_of(const DualQuaternion& x);

/// Skew-symmetric matrix with cross_matrix(a) * b == a x b.
Matrix3 cross_matrix(const Vector3& a);

std::ostream& operator<<(std::ostream& os, const Quaternion& h);
std::ostream& operator<<(std::ostream& os, const DualQuaternion& x);

}  // namespace dqteleop
