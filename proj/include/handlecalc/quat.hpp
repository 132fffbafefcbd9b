#pragma once

#include <array>
#include <cmath>

namespace handlecalc {

/// Unit quaternion, used only for geometric certificates (fixed-point
/// witnesses on S^3). All group arithmetic elsewhere is exact; quaternions
/// never feed into genus or order computations.
struct Quat {
    double w = 1, x = 0, y = 0, z = 0;

    Quat operator*(const Quat& q) const {
        return Quat{w * q.w - x * q.x - y * q.y - z * q.z,
                    w * q.x + x * q.w + y * q.z - z * q.y,
                    w * q.y - x * q.z + y * q.w + z * q.x,
                    w * q.z + x * q.y - y * q.x + z * q.w};
    }
    Quat conj() const { return Quat{w, -x, -y, -z}; }
    Quat operator-() const { return Quat{-w, -x, -y, -z}; }

    double dist(const Quat& q) const {
        double dw = w - q.w, dx = x - q.x, dy = y - q.y, dz = z - q.z;
        return std::sqrt(dw * dw + dx * dx + dy * dy + dz * dz);
    }
    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    static Quat one() { return Quat{1, 0, 0, 0}; }
    /// cos(theta) + sin(theta) i
    static Quat from_angle(double theta) { return Quat{std::cos(theta), std::sin(theta), 0, 0}; }
};

/// A pair (q1, q2) acting on S^3 by x -> q1^{-1} x q2. The pairs (q1, q2) and
/// (-q1, -q2) induce the same isometry, which is exactly the central-product
/// identification.
struct QuatPair {
    Quat left, right;

    Quat apply(const Quat& p) const { return left.conj() * p * right; }
};

inline constexpr double kGeomTolerance = 1e-9;

}  // namespace handlecalc
