#pragma once

// SO(3)/SE(3) primitives used throughout the rod kinematics: hat maps,
// (co)adjoint operators, the closed-form SE(3) exponential and its tangent
// operator, and the two-point fourth-order Magnus expansion.
//
// Convention: 6-vectors stack (angular, linear), i.e. a strain twist is
// xi = (kappa, nu) and a velocity twist is beta = (omega, u). All 6x6 block
// operators follow that layout.

#include <Eigen/Dense>
#include <cmath>

namespace cosserat {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

using Twist = Vec6;       // (kappa, nu) or (omega, u)
using MagnusTerm = Vec6;  // Magnus expansion of a twist over an interval

inline Eigen::Ref<const Vec3> angular(const Vec6& v) { return v.head<3>(); }
inline Eigen::Ref<const Vec3> linear(const Vec6& v) { return v.tail<3>(); }

// Angle below which the trigonometric coefficients switch to their Taylor
// expansions. The closed forms are 0/0 at theta = 0 and lose up to 9 digits
// to cancellation below theta ~ 1e-2, so the switch sits well above that.
inline constexpr double kSmallAngle = 0.1;

inline Mat3 hat3(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return m;
}

inline Vec3 vee3(const Mat3& m) {
    return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

// ad_xi = [[~kappa, 0], [~nu, ~kappa]]
inline Mat6 ad_se3(const Vec6& xi) {
    Mat6 m = Mat6::Zero();
    const Mat3 k = hat3(angular(xi));
    m.topLeftCorner<3, 3>() = k;
    m.bottomRightCorner<3, 3>() = k;
    m.bottomLeftCorner<3, 3>() = hat3(linear(xi));
    return m;
}

// ad*_xi = [[~kappa, ~nu], [0, ~kappa]]; satisfies <ad*_xi F, eta> = <F, ad_xi eta>
inline Mat6 coad_se3(const Vec6& xi) {
    Mat6 m = Mat6::Zero();
    const Mat3 k = hat3(angular(xi));
    m.topLeftCorner<3, 3>() = k;
    m.bottomRightCorner<3, 3>() = k;
    m.topRightCorner<3, 3>() = hat3(linear(xi));
    return m;
}

struct Pose {
    Mat3 R = Mat3::Identity();
    Vec3 r = Vec3::Zero();

    static Pose Identity() { return Pose{}; }

    Pose operator*(const Pose& o) const { return Pose{R * o.R, r + R * o.r}; }

    Pose inverse() const { return Pose{R.transpose(), -(R.transpose() * r)}; }

    Mat4 matrix() const {
        Mat4 m = Mat4::Identity();
        m.topLeftCorner<3, 3>() = R;
        m.topRightCorner<3, 1>() = r;
        return m;
    }

    // Polar projection of R back onto SO(3).
    void orthonormalize() {
        Eigen::Quaterniond q(R);
        q.normalize();
        R = q.toRotationMatrix();
    }
};

// Ad_g = [[R, 0], [~r R, R]]
inline Mat6 Adjoint(const Pose& g) {
    Mat6 m = Mat6::Zero();
    m.topLeftCorner<3, 3>() = g.R;
    m.bottomRightCorner<3, 3>() = g.R;
    m.bottomLeftCorner<3, 3>() = hat3(g.r) * g.R;
    return m;
}

// Ad*_g = [[R, ~r R], [0, R]]
inline Mat6 coAdjoint(const Pose& g) {
    Mat6 m = Mat6::Zero();
    m.topLeftCorner<3, 3>() = g.R;
    m.bottomRightCorner<3, 3>() = g.R;
    m.topRightCorner<3, 3>() = hat3(g.r) * g.R;
    return m;
}

namespace detail {

// (1 - cos t)/t^2 and (t - sin t)/t^3 with small-angle Taylor branches.
inline double coef_c2(double t) {
    if (t < kSmallAngle) {
        const double t2 = t * t;
        return 0.5 + t2 * (-1.0 / 24.0 + t2 * (1.0 / 720.0 - t2 / 40320.0));
    }
    return (1.0 - std::cos(t)) / (t * t);
}

inline double coef_c3(double t) {
    if (t < kSmallAngle) {
        const double t2 = t * t;
        return 1.0 / 6.0 + t2 * (-1.0 / 120.0 + t2 * (1.0 / 5040.0 - t2 / 362880.0));
    }
    return (t - std::sin(t)) / (t * t * t);
}

struct TangentCoefs {
    double a1, a2, a3, a4;
};

inline TangentCoefs tangent_coefs(double t) {
    if (t < kSmallAngle) {
        const double t2 = t * t;
        const double t4 = t2 * t2;
        const double t6 = t4 * t2;
        return {0.5 - t4 / 720.0 + t6 / 20160.0,
                1.0 / 6.0 - t4 / 5040.0 + t6 / 181440.0,
                1.0 / 24.0 - t2 / 360.0 + t4 / 13440.0 - t6 / 907200.0,
                1.0 / 120.0 - t2 / 2520.0 + t4 / 120960.0 - t6 / 9979200.0};
    }
    const double s = std::sin(t), c = std::cos(t);
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    return {(4.0 - 4.0 * c - t * s) / (2.0 * t2),
            (4.0 * t - 5.0 * s + t * c) / (2.0 * t3),
            (2.0 - 2.0 * c - t * s) / (2.0 * t4),
            (2.0 * t - 3.0 * s + t * c) / (2.0 * t5)};
}

// d/dtheta of the four tangent coefficients.
inline TangentCoefs tangent_coefs_dtheta(double t) {
    if (t < kSmallAngle) {
        const double t2 = t * t;
        const double t3 = t2 * t;
        const double t5 = t3 * t2;
        return {-t3 / 180.0 + t5 / 3360.0,
                -t3 / 1260.0 + t5 / 30240.0,
                -t / 180.0 + t3 / 3360.0 - t5 / 151200.0,
                -t / 1260.0 + t3 / 30240.0 - t5 / 1663200.0};
    }
    const double s = std::sin(t), c = std::cos(t);
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t, t6 = t5 * t;
    // quotient rule on N_k(t) / (2 t^k)
    const double n1 = 4.0 - 4.0 * c - t * s, d1 = 3.0 * s - t * c;
    const double n2 = 4.0 * t - 5.0 * s + t * c, d2 = 4.0 - 4.0 * c - t * s;
    const double n3 = 2.0 - 2.0 * c - t * s, d3 = s - t * c;
    const double n4 = 2.0 * t - 3.0 * s + t * c, d4 = 2.0 - 2.0 * c - t * s;
    return {d1 / (2.0 * t2) - n1 / t3,
            d2 / (2.0 * t3) - 1.5 * n2 / t4,
            d3 / (2.0 * t4) - 2.0 * n3 / t5,
            d4 / (2.0 * t5) - 2.5 * n4 / t6};
}

}  // namespace detail

// Closed-form exponential map of se(3): quartic polynomial in hat(Omega).
inline Pose exp_se3(const Vec6& omega) {
    const Vec3 k = angular(omega);
    const Vec3 v = linear(omega);
    const double t = k.norm();
    const Mat3 kh = hat3(k);
    const Mat3 kh2 = kh * kh;
    const double c2 = detail::coef_c2(t);
    const double c3 = detail::coef_c3(t);
    Pose g;
    g.R = Mat3::Identity() + (1.0 - c3 * t * t) * kh + c2 * kh2;
    g.r = (Mat3::Identity() + c2 * kh + c3 * kh2) * v;
    return g;
}

// Logarithm of SE(3); inverse of exp_se3 for rotation angles < pi.
inline Vec6 log_se3(const Pose& g) {
    const double tr = g.R.trace();
    const double ct = std::min(1.0, std::max(-1.0, (tr - 1.0) / 2.0));
    const double t = std::acos(ct);
    Vec3 k;
    if (t < kSmallAngle) {
        k = vee3(g.R - g.R.transpose()) / 2.0;
    } else {
        k = vee3(g.R - g.R.transpose()) * (t / (2.0 * std::sin(t)));
    }
    const Mat3 kh = hat3(k);
    const Mat3 kh2 = kh * kh;
    const double c2 = detail::coef_c2(t);
    const double c3 = detail::coef_c3(t);
    // invert V = I + c2*kh + c3*kh2
    const Mat3 V = Mat3::Identity() + c2 * kh + c3 * kh2;
    Vec6 out;
    out.head<3>() = k;
    out.tail<3>() = V.partialPivLu().solve(g.r);
    return out;
}

// Tangent operator of the exponential map, T_Omega = I + a1 ad + a2 ad^2 + a3 ad^3 + a4 ad^4.
// Satisfies d/de exp(Omega + e*delta)|_0 = hat(T_Omega delta) * exp(Omega).
inline Mat6 tangent_op(const Vec6& omega) {
    const double t = angular(omega).norm();
    const auto c = detail::tangent_coefs(t);
    const Mat6 ad1 = ad_se3(omega);
    const Mat6 ad2 = ad1 * ad1;
    const Mat6 ad3 = ad2 * ad1;
    const Mat6 ad4 = ad3 * ad1;
    return Mat6::Identity() + c.a1 * ad1 + c.a2 * ad2 + c.a3 * ad3 + c.a4 * ad4;
}

// Directional derivative of the tangent operator: d/de T(Omega + e*dOmega)|_0.
inline Mat6 tangent_op_deriv(const Vec6& omega, const Vec6& domega) {
    const Vec3 k = angular(omega);
    const double t = k.norm();
    const auto c = detail::tangent_coefs(t);
    const auto dc = detail::tangent_coefs_dtheta(t);
    const double dt = (t > 0.0) ? k.dot(angular(domega)) / t : 0.0;

    const Mat6 A = ad_se3(omega);
    const Mat6 D = ad_se3(domega);
    const Mat6 A2 = A * A;
    const Mat6 A3 = A2 * A;
    // product-rule expansion of ad^k
    const Mat6 dA2 = D * A + A * D;
    const Mat6 dA3 = D * A2 + A * D * A + A2 * D;
    const Mat6 dA4 = D * A3 + A * D * A2 + A2 * D * A + A3 * D;

    Mat6 out = c.a1 * D + c.a2 * dA2 + c.a3 * dA3 + c.a4 * dA4;
    if (dt != 0.0) {
        out += dt * (dc.a1 * A + dc.a2 * A2 + dc.a3 * A3 + dc.a4 * (A2 * A2));
    }
    return out;
}

// Fourth-order two-point Magnus expansion over an interval of length h:
//   Omega(h) = h/2 (xi1 + xi2) + sqrt(3) h^2 / 12 * ad_{xi1} xi2
// with xi1, xi2 evaluated at the collocation points s + (1/2 -+ sqrt(3)/6) h.
inline Vec6 zanna_magnus(const Vec6& xi1, const Vec6& xi2, double h) {
    return 0.5 * h * (xi1 + xi2) +
           (std::sqrt(3.0) * h * h / 12.0) * (ad_se3(xi1) * xi2);
}

// Derivative of zanna_magnus w.r.t. generalized coordinates, applied to basis
// columns Phi1, Phi2 (6 x n each): the Magnus expansion of the basis.
template <typename D1, typename D2>
Eigen::Matrix<double, 6, Eigen::Dynamic> zanna_magnus_basis(
    const Vec6& xi1, const Vec6& xi2,
    const Eigen::MatrixBase<D1>& Phi1, const Eigen::MatrixBase<D2>& Phi2, double h) {
    const double cc = std::sqrt(3.0) * h * h / 12.0;
    return 0.5 * h * (Phi1 + Phi2) + cc * (ad_se3(xi1) * Phi2 - ad_se3(xi2) * Phi1);
}

}  // namespace cosserat
