#include "dqteleop/dq.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace dqteleop {

Quaternion Quaternion::rotation(double angle, const Vector3& axis)
{
    const Vector3 n = axis.normalized();
    const double s = std::sin(0.5 * angle);
    return {std::cos(0.5 * angle), s * n(0), s * n(1), s * n(2)};
}

Quaternion Quaternion::operator*(const Quaternion& b) const
{
    return {w_ * b.w_ - x_ * b.x_ - y_ * b.y_ - z_ * b.z_,
            w_ * b.x_ + x_ * b.w_ + y_ * b.z_ - z_ * b.y_,
            w_ * b.y_ - x_ * b.z_ + y_ * b.w_ + z_ * b.x_,
            w_ * b.z_ + x_ * b.y_ - y_ * b.x_ + z_ * b.w_};
}

double Quaternion::norm() const { return std::sqrt(squared_norm()); }

Quaternion Quaternion::normalized() const
{
    const double n = norm();
    if (n == 0.0) {
        throw std::domain_error("cannot normalize a zero quaternion");
    }
    return *this * (1.0 / n);
}

bool Quaternion::is_unit(double tol) const { return std::abs(norm() - 1.0) <= tol; }

Vector4 vec4(const Quaternion& h) { return {h.w(), h.x(), h.y(), h.z()}; }

Vector3 vec3(const Quaternion& t)
{
    if (!t.is_pure()) {
        throw std::invalid_argument("not a pure quaternion");
    }
    return {t.x(), t.y(), t.z()};
}

double dot(const Quaternion& a, const Quaternion& b)
{
    return a.w() * b.w() + a.x() * b.x() + a.y() * b.y() + a.z() * b.z();
}

Quaternion cross(const Quaternion& a, const Quaternion& b)
{
    const Vector3 av(a.x(), a.y(), a.z());
    const Vector3 bv(b.x(), b.y(), b.z());
    return Quaternion::pure(av.cross(bv));
}

Matrix4 hamilton_plus4(const Quaternion& a)
{
    Matrix4 m;
    // clang-format off
    m << a.w(), -a.x(), -a.y(), -a.z(),
         a.x(),  a.w(), -a.z(),  a.y(),
         a.y(),  a.z(),  a.w(), -a.x(),
         a.z(), -a.y(),  a.x(),  a.w();
    // clang-format on
    return m;
}

Matrix4 hamilton_minus4(const Quaternion& b)
{
    Matrix4 m;
    // clang-format off
    m << b.w(), -b.x(), -b.y(), -b.z(),
         b.x(),  b.w(),  b.z(), -b.y(),
         b.y(), -b.z(),  b.w(),  b.x(),
         b.z(),  b.y(), -b.x(),  b.w();
    // clang-format on
    return m;
}

Matrix4 conj_matrix4() { return Vector4(1.0, -1.0, -1.0, -1.0).asDiagonal(); }

DualQuaternion DualQuaternion::from_vec8(const Vector8& v)
{
    return {Quaternion::from_vec4(v.head<4>()), Quaternion::from_vec4(v.tail<4>())};
}

DualQuaternion DualQuaternion::translation(const Vector3& t)
{
    return {quat::one, Quaternion::pure(0.5 * t)};
}

DualQuaternion DualQuaternion::operator*(const DualQuaternion& b) const
{
    return {primary_ * b.primary_, primary_ * b.dual_ + dual_ * b.primary_};
}

bool DualQuaternion::is_unit(double tol) const
{
    return primary_.is_unit(tol) && std::abs(dot(primary_, dual_)) <= tol;
}

DualQuaternion DualQuaternion::normalized() const
{
    const Quaternion p = primary_.normalized();
    // Scale the dual part consistently, then drop its component along p.
    const Quaternion d = dual_ * (1.0 / primary_.norm());
    return {p, d - p * dot(p, d)};
}

Vector8 vec8(const DualQuaternion& x)
{
    Vector8 v;
    v << vec4(x.primary()), vec4(x.dual());
    return v;
}

Matrix8 hamilton_plus8(const DualQuaternion& a)
{
    Matrix8 m = Matrix8::Zero();
    const Matrix4 p = hamilton_plus4(a.primary());
    m.topLeftCorner<4, 4>() = p;
    m.bottomRightCorner<4, 4>() = p;
    m.bottomLeftCorner<4, 4>() = hamilton_plus4(a.dual());
    return m;
}

Matrix8 hamilton_minus8(const DualQuaternion& b)
{
    Matrix8 m = Matrix8::Zero();
    const Matrix4 p = hamilton_minus4(b.primary());
    m.topLeftCorner<4, 4>() = p;
    m.bottomRightCorner<4, 4>() = p;
    m.bottomLeftCorner<4, 4>() = hamilton_minus4(b.dual());
    return m;
}

Matrix8 conj_matrix8()
{
    Vector8 d;
    d << 1.0, -1.0, -1.0, -1.0, 1.0, -1.0, -1.0, -1.0;
    return d.asDiagonal();
}

DualQuaternion pose_from_rt(const Quaternion& r, const Quaternion& t)
{
    return {r, t * r * 0.5};
}

RotationTranslation rt_from_pose(const DualQuaternion& x)
{
    if (!x.is_unit()) {
        throw std::invalid_argument("rt_from_pose: not a unit dual quaternion");
    }
    const Quaternion t = x.dual() * x.primary().conj() * 2.0;
    // The real part vanishes analytically; zero it so vec3 accepts the result.
    return {x.primary(), t.im()};
}

Vector3 translation_of(const DualQuaternion& x)
{
    const Quaternion t = x.dual() * x.primary().conj() * 2.0;
    return {t.x(), t.y(), t.z()};
}

Matrix3 cross_matrix(const Vector3& a)
{
    Matrix3 s;
    // clang-format off
    s <<  0.0,  -a(2),  a(1),
          a(2),  0.0,  -a(0),
         -a(1),  a(0),  0.0;
    // clang-format on
    return s;
}

std::ostream& operator<<(std::ostream& os, const Quaternion& h)
{
    return os << "(" << h.w() << " + " << h.x() << "i + " << h.y() << "j + " << h.z() << "k)";
}

std::ostream& operator<<(std::ostream& os, const DualQuaternion& x)
{
    return os << x.primary() << " + E" << x.dual();
}

}  // namespace dqteleop
