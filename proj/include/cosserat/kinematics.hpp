#pragma once

// Recursive forward kinematics over the rod: poses, geometric Jacobians and
// their time derivatives, velocity twists, and the inflation field, all on
// the propagation grid of a quadrature rule. Each substep composes the pose
// with the exponential of a two-point Magnus expansion; the Jacobian and its
// time derivative follow the differentiated recursion.

#include <Eigen/Dense>
#include <vector>

#include "basis.hpp"
#include "liegroup.hpp"
#include "material.hpp"

namespace cosserat {

struct FrameField {
    // per propagation node
    std::vector<Pose> g;
    std::vector<MatrixXd> J;
    std::vector<MatrixXd> Jdot;
    std::vector<Vec6> beta;
    std::vector<double> rho, drho, rhodot;

    // per quadrature point
    std::vector<Vec6> xi_q, xidot_q;
};

// Cached strain-basis evaluations on the fixed arclength grid of a rule.
struct KinematicsCache {
    std::vector<MatrixXd> phi_za, phi_zb;  // per substep
    std::vector<MatrixXd> phi_quad;        // per quadrature point

    KinematicsCache() = default;
    KinematicsCache(const XiBasis& basis, const QuadratureRule& rule) {
        phi_za.reserve(rule.substeps.size());
        phi_zb.reserve(rule.substeps.size());
        for (const auto& st : rule.substeps) {
            phi_za.push_back(basis.eval(st.za));
            phi_zb.push_back(basis.eval(st.zb));
        }
        phi_quad.reserve(rule.points.size());
        for (double s : rule.points) phi_quad.push_back(basis.eval(s));
    }
};

namespace detail {

struct SubstepOps {
    Pose E;
    Mat6 Adinv;
    MatrixXd TPhi;       // T_Omega Phi_Omega
    MatrixXd dTPhi_dt;   // d/dt (T_Omega Phi_Omega), only if velocities requested
    Vec6 w = Vec6::Zero();  // body tangent velocity T_Omega Omegadot
};

inline SubstepOps substep_ops(const Vec6& xi1, const Vec6& xi2, const MatrixXd& phi1,
                              const MatrixXd& phi2, double h, const VectorXd* qdot) {
    SubstepOps ops;
    const Vec6 omega = zanna_magnus(xi1, xi2, h);
    const MatrixXd phi_omega = zanna_magnus_basis(xi1, xi2, phi1, phi2, h);
    ops.E = exp_se3(omega);
    ops.Adinv = Adjoint(ops.E.inverse());
    const Mat6 T = tangent_op(omega);
    ops.TPhi = T * phi_omega;
    if (qdot) {
        const Vec6 xidot1 = phi1 * (*qdot);
        const Vec6 xidot2 = phi2 * (*qdot);
        const Vec6 omegadot = phi_omega * (*qdot);
        const double cc = std::sqrt(3.0) * h * h / 12.0;
        const MatrixXd dphi_omega = cc * (ad_se3(xidot1) * phi2 - ad_se3(xidot2) * phi1);
        ops.dTPhi_dt = tangent_op_deriv(omega, omegadot) * phi_omega + T * dphi_omega;
        ops.w = T * omegadot;
    }
    return ops;
}

}  // namespace detail

// Full kinematic sweep. qdot_xi may be empty when velocities are not needed;
// Jdot is then left empty as well.
inline FrameField propagate(const XiBasis& xi_basis, const RhoBasis& rho_basis,
                            const VectorXd& q_xi, const VectorXd& qdot_xi,
                            const VectorXd& q_rho, const VectorXd& qdot_rho,
                            const QuadratureRule& rule, const KinematicsCache& cache) {
    const int n = xi_basis.n();
    const bool with_vel = qdot_xi.size() > 0;
    const size_t n_nodes = rule.prop_nodes.size();

    FrameField f;
    f.g.resize(n_nodes);
    f.J.resize(n_nodes);
    f.beta.assign(n_nodes, Vec6::Zero());
    if (with_vel) f.Jdot.resize(n_nodes);

    f.g[0] = Pose::Identity();  // clamped base
    f.J[0] = MatrixXd::Zero(6, n);
    if (with_vel) f.Jdot[0] = MatrixXd::Zero(6, n);

    for (size_t j = 0; j + 1 < n_nodes; ++j) {
        const auto& st = rule.substeps[j];
        const double h = st.sb - st.sa;
        const Vec6 xi1 = cache.phi_za[j] * q_xi + xi_basis.xi_star;
        const Vec6 xi2 = cache.phi_zb[j] * q_xi + xi_basis.xi_star;
        const auto ops = detail::substep_ops(xi1, xi2, cache.phi_za[j], cache.phi_zb[j], h,
                                             with_vel ? &qdot_xi : nullptr);
        f.g[j + 1] = f.g[j] * ops.E;
        f.g[j + 1].orthonormalize();
        f.J[j + 1] = ops.Adinv * (f.J[j] + ops.TPhi);
        if (with_vel) {
            f.Jdot[j + 1] = ops.Adinv * (f.Jdot[j] + ops.dTPhi_dt -
                                         ad_se3(ops.w) * (f.J[j] + ops.TPhi));
            f.beta[j + 1] = f.J[j + 1] * qdot_xi;
        }
    }

    // strain fields at the quadrature points
    const int nq = rule.n_points();
    f.xi_q.resize(nq);
    f.xidot_q.assign(nq, Vec6::Zero());
    for (int k = 0; k < nq; ++k) {
        f.xi_q[k] = cache.phi_quad[k] * q_xi + xi_basis.xi_star;
        if (with_vel) f.xidot_q[k] = cache.phi_quad[k] * qdot_xi;
    }

    // inflation field at the propagation nodes
    f.rho.resize(n_nodes);
    f.drho.resize(n_nodes);
    f.rhodot.assign(n_nodes, 0.0);
    for (size_t j = 0; j < n_nodes; ++j) {
        auto [r, dr] = rho_basis.inflation(q_rho, rule.prop_nodes[j]);
        if (r <= 0.0)
            throw DegenerateSectionError("inflation ratio non-positive along the rod");
        f.rho[j] = r;
        f.drho[j] = dr;
        if (qdot_rho.size() > 0) f.rhodot[j] = rho_basis.inflation_rate(qdot_rho, rule.prop_nodes[j]).first;
    }
    return f;
}

// ---- spec-level convenience wrappers -------------------------------------

inline std::vector<Pose> propagate_poses(const XiBasis& basis, const VectorXd& q_xi,
                                         const QuadratureRule& rule) {
    KinematicsCache cache(basis, rule);
    RhoBasis none;
    none.L = rule.L;
    auto f = propagate(basis, none, q_xi, VectorXd(), VectorXd(), VectorXd(), rule, cache);
    return f.g;
}

inline std::vector<MatrixXd> propagate_jacobian(const XiBasis& basis, const VectorXd& q_xi,
                                                const QuadratureRule& rule) {
    KinematicsCache cache(basis, rule);
    RhoBasis none;
    none.L = rule.L;
    auto f = propagate(basis, none, q_xi, VectorXd(), VectorXd(), VectorXd(), rule, cache);
    return f.J;
}

// beta = J qdot and betadot = J qddot + Jdot qdot at every propagation node.
inline std::pair<std::vector<Vec6>, std::vector<Vec6>> propagate_velocity_acceleration(
    const XiBasis& basis, const VectorXd& q_xi, const VectorXd& qdot_xi,
    const VectorXd& qddot_xi, const QuadratureRule& rule) {
    KinematicsCache cache(basis, rule);
    RhoBasis none;
    none.L = rule.L;
    auto f = propagate(basis, none, q_xi, qdot_xi, VectorXd(), VectorXd(), rule, cache);
    std::vector<Vec6> beta = f.beta;
    std::vector<Vec6> betadot(beta.size());
    for (size_t j = 0; j < beta.size(); ++j)
        betadot[j] = f.J[j] * qddot_xi + f.Jdot[j] * qdot_xi;
    return {beta, betadot};
}

// (rho, rho', rhodot) at every propagation node.
struct InflationField {
    std::vector<double> rho, drho, rhodot;
};

inline InflationField inflation_field(const RhoBasis& basis, const VectorXd& q_rho,
                                      const VectorXd& qdot_rho, const QuadratureRule& rule) {
    InflationField f;
    for (double s : rule.prop_nodes) {
        auto [r, dr] = basis.inflation(q_rho, s);
        if (r <= 0.0)
            throw DegenerateSectionError("inflation ratio non-positive along the rod");
        f.rho.push_back(r);
        f.drho.push_back(dr);
        f.rhodot.push_back(qdot_rho.size() > 0 ? basis.inflation_rate(qdot_rho, s).first : 0.0);
    }
    return f;
}

// Pose, Jacobian, and velocity twist at an arbitrary arclength, obtained by a
// single Magnus substep from the nearest propagation node at or below s.
struct FrameSample {
    Pose g;
    MatrixXd J;
    Vec6 beta;
};

inline FrameSample frame_at(const FrameField& field, const XiBasis& basis, const VectorXd& q_xi,
                            const VectorXd& qdot_xi, const QuadratureRule& rule, double s) {
    const auto& nodes = rule.prop_nodes;
    size_t j = 0;
    while (j + 1 < nodes.size() && nodes[j + 1] <= s) ++j;
    FrameSample out;
    const double h = s - nodes[j];
    if (h < 1e-14) {
        out.g = field.g[j];
        out.J = field.J[j];
    } else {
        const double c = std::sqrt(3.0) / 6.0;
        const double za = nodes[j] + (0.5 - c) * h;
        const double zb = nodes[j] + (0.5 + c) * h;
        const MatrixXd phi1 = basis.eval(za), phi2 = basis.eval(zb);
        const Vec6 xi1 = phi1 * q_xi + basis.xi_star;
        const Vec6 xi2 = phi2 * q_xi + basis.xi_star;
        const auto ops = detail::substep_ops(xi1, xi2, phi1, phi2, h, nullptr);
        out.g = field.g[j] * ops.E;
        out.J = ops.Adinv * (field.J[j] + ops.TPhi);
    }
    out.beta = (qdot_xi.size() > 0) ? Vec6(out.J * qdot_xi) : Vec6::Zero();
    return out;
}

}  // namespace cosserat
