#pragma once

// Rod geometry, material constants, and the constitutive laws: the extended
// law couples the strain twist to the cross-sectional inflation ratio through
// the Lame parameters; the classic law is the plain Cosserat reduction.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "liegroup.hpp"

namespace cosserat {

// Section collapse threshold: the small-strain model is meaningless long
// before rho approaches zero.
inline constexpr double kMinInflation = 0.05;

struct DegenerateSectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MaterialParams {
    double E = 0.0;      // Young's modulus (Pa)
    double nu0 = 0.4999; // Poisson's ratio, strictly below 0.5
    double eta = 0.0;    // shear viscosity (Pa s)
    double rho0 = 0.0;   // body density (kg/m^3)

    MaterialParams() = default;
    MaterialParams(double E_, double nu_, double eta_, double rho_)
        : E(E_), nu0(nu_), eta(eta_), rho0(rho_) {
        if (!(nu0 > 0.0 && nu0 < 0.5))
            throw std::invalid_argument(
                "MaterialParams: Poisson's ratio must satisfy 0 < nu < 0.5; "
                "incompressibility is approximated by nu = 0.4999, never 0.5");
        if (E <= 0.0) throw std::invalid_argument("MaterialParams: E must be positive");
    }

    double mu() const { return E / (2.0 * (1.0 + nu0)); }
    double lambda() const { return E * nu0 / ((1.0 + nu0) * (1.0 - 2.0 * nu0)); }
    double eta_E() const { return 3.0 * eta; }
};

// Circular cross-section profile along the rod: constant radius (cylinder)
// or linear taper (truncated cone).
struct SectionProfile {
    double L = 0.0;
    double z_base = 0.0;
    double z_tip = 0.0;

    static SectionProfile cylinder(double L, double z) { return {L, z, z}; }
    static SectionProfile cone(double L, double zb, double zt) { return {L, zb, zt}; }

    double radius(double s) const { return z_base + (z_tip - z_base) * (s / L); }
    double radius_deriv() const { return (z_tip - z_base) / L; }
    double area(double s) const {
        const double z = radius(s);
        return M_PI * z * z;
    }
    double I11(double s) const {
        const double z = radius(s);
        return M_PI * z * z * z * z / 4.0;
    }
    double I22(double s) const { return I11(s); }
    double I33(double s) const { return 2.0 * I11(s); }  // polar moment
};

struct SectionValues {
    double A0, I11, I22, I33, z;
};

inline SectionValues section_properties(const SectionProfile& p, double s) {
    if (s < -1e-12 || s > p.L * (1.0 + 1e-12))
        throw std::domain_error("section_properties: arclength outside [0, L]");
    return {p.area(s), p.I11(s), p.I22(s), p.I33(s), p.radius(s)};
}

enum class ConstitutiveKind { Extended, Classic };

// Screw stiffness/damping matrices and the inflation coupling at arclength s,
// in the (angular, linear) stacking order.
struct ConstitutiveMatrices {
    Mat6 Sigma = Mat6::Zero();       // screw elasticity
    Mat6 Upsilon = Mat6::Zero();     // screw damping
    Vec6 sigma = Vec6::Zero();       // inflation-to-wrench coupling (2 lambda A0 at nu3)
    double coupling = 0.0;           // the shared 2 lambda A0 scalar
    double k_rho = 0.0;              // 4 (lambda + mu) A0
    double d_rho = 0.0;              // 4 eta A0
    double kQ = 0.0;                 // mu I33
    double dQ = 0.0;                 // eta I33
};

inline ConstitutiveMatrices constitutive_matrices(const MaterialParams& m,
                                                  const SectionProfile& p, double s,
                                                  ConstitutiveKind kind) {
    const auto sec = section_properties(p, s);
    const double mu = m.mu(), lam = m.lambda();
    ConstitutiveMatrices c;
    c.Sigma(0, 0) = m.E * sec.I11;
    c.Sigma(1, 1) = m.E * sec.I22;
    c.Sigma(2, 2) = mu * sec.I33;
    c.Upsilon(0, 0) = m.eta_E() * sec.I11;
    c.Upsilon(1, 1) = m.eta_E() * sec.I22;
    c.Upsilon(2, 2) = m.eta * sec.I33;
    if (kind == ConstitutiveKind::Extended) {
        c.Sigma(3, 3) = mu * sec.A0;
        c.Sigma(4, 4) = mu * sec.A0;
        c.Sigma(5, 5) = (lam + 2.0 * mu) * sec.A0;
        c.Upsilon(3, 3) = m.eta * sec.A0;
        c.Upsilon(4, 4) = m.eta * sec.A0;
        c.Upsilon(5, 5) = 2.0 * m.eta * sec.A0;
        c.coupling = 2.0 * lam * sec.A0;
        c.sigma(5) = c.coupling;
        c.k_rho = 4.0 * (lam + mu) * sec.A0;
        c.d_rho = 4.0 * m.eta * sec.A0;
    } else {
        c.Sigma(3, 3) = mu * sec.A0;
        c.Sigma(4, 4) = mu * sec.A0;
        c.Sigma(5, 5) = m.E * sec.A0;
        c.Upsilon(3, 3) = m.eta * sec.A0;
        c.Upsilon(4, 4) = m.eta * sec.A0;
        c.Upsilon(5, 5) = m.eta_E() * sec.A0;
    }
    c.kQ = mu * sec.I33;
    c.dQ = m.eta * sec.I33;
    return c;
}

inline void check_inflation(double rho) {
    if (rho <= kMinInflation)
        throw DegenerateSectionError("cross-section inflation ratio collapsed (rho <= 0.05)");
}

// Local-frame internal wrench of the extended law,
//   F_i = Sigma (xi - xi*) + Upsilon xidot + sigma (rho - rho*).
inline Vec6 internal_wrench_extended(const MaterialParams& m, const SectionProfile& p,
                                     const Vec6& xi, const Vec6& xidot, double rho, double s,
                                     const Vec6& xi_star = (Vec6() << 0, 0, 0, 0, 0, 1).finished(),
                                     double rho_star = 1.0) {
    check_inflation(rho);
    const auto c = constitutive_matrices(m, p, s, ConstitutiveKind::Extended);
    return c.Sigma * (xi - xi_star) + c.Upsilon * xidot + c.sigma * (rho - rho_star);
}

// Classic Cosserat internal wrench (no inflation coupling).
inline Vec6 internal_wrench_classic(const MaterialParams& m, const SectionProfile& p,
                                    const Vec6& xi, const Vec6& xidot, double s,
                                    const Vec6& xi_star = (Vec6() << 0, 0, 0, 0, 0, 1).finished()) {
    const auto c = constitutive_matrices(m, p, s, ConstitutiveKind::Classic);
    return c.Sigma * (xi - xi_star) + c.Upsilon * xidot;
}

// Q = mu I33 rho' + eta I33 rhodot'
inline double lateral_traction_Q(const MaterialParams& m, const SectionProfile& p,
                                 double drho, double drhodot, double s) {
    const auto sec = section_properties(p, s);
    return m.mu() * sec.I33 * drho + m.eta * sec.I33 * drhodot;
}

// q = 4 (lambda + mu) A0 (rho - 1) + 2 lambda A0 (nu3 - 1) + 4 eta A0 rhodot
inline double lateral_traction_q(const MaterialParams& m, const SectionProfile& p,
                                 double rho, double rhodot, double nu3, double s) {
    check_inflation(rho);
    const auto sec = section_properties(p, s);
    const double mu = m.mu(), lam = m.lambda();
    return 4.0 * (lam + mu) * sec.A0 * (rho - 1.0) + 2.0 * lam * sec.A0 * (nu3 - 1.0) +
           4.0 * m.eta * sec.A0 * rhodot;
}

// Elastic strain energy per unit length of the extended law.
inline double strain_energy_density(const MaterialParams& m, const SectionProfile& p,
                                    const Vec6& xi, double rho, double drho, double s,
                                    const Vec6& xi_star = (Vec6() << 0, 0, 0, 0, 0, 1).finished(),
                                    double rho_star = 1.0) {
    check_inflation(rho);
    const auto sec = section_properties(p, s);
    const double mu = m.mu(), lam = m.lambda();
    const Vec6 d = xi - xi_star;
    const double rr = rho - rho_star;
    return 2.0 * (lam + mu) * sec.A0 * rr * rr + 2.0 * lam * sec.A0 * rr * d(5) +
           0.5 * mu * sec.A0 * (d(3) * d(3) + d(4) * d(4)) +
           0.5 * (lam + 2.0 * mu) * sec.A0 * d(5) * d(5) +
           0.5 * m.E * (sec.I11 * d(0) * d(0) + sec.I22 * d(1) * d(1)) +
           0.5 * mu * sec.I33 * d(2) * d(2) + 0.5 * mu * sec.I33 * drho * drho;
}

// Classic-law elastic energy density, used for energy diagnostics when the
// inflation DOF is disabled.
inline double strain_energy_density_classic(
    const MaterialParams& m, const SectionProfile& p, const Vec6& xi, double s,
    const Vec6& xi_star = (Vec6() << 0, 0, 0, 0, 0, 1).finished()) {
    const auto sec = section_properties(p, s);
    const double mu = m.mu();
    const Vec6 d = xi - xi_star;
    return 0.5 * mu * sec.A0 * (d(3) * d(3) + d(4) * d(4)) +
           0.5 * m.E * sec.A0 * d(5) * d(5) +
           0.5 * m.E * (sec.I11 * d(0) * d(0) + sec.I22 * d(1) * d(1)) +
           0.5 * mu * sec.I33 * d(2) * d(2);
}

}  // namespace cosserat
