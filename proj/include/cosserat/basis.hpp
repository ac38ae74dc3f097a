#pragma once

// Strain-basis construction and quadrature: composite Gauss-Legendre rules
// over the rod length, Legendre polynomial bases for the strain twist, and
// piecewise cubic Hermite bases for the cross-sectional inflation ratio.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "liegroup.hpp"

namespace cosserat {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

// Standard Legendre polynomial P_order rescaled to [0, L] via X = 2s/L - 1.
inline double legendre_eval(int order, double s, double L) {
    if (s < -1e-12 * L || s > L * (1.0 + 1e-12))
        throw std::domain_error("legendre_eval: arclength outside [0, L]");
    const double x = 2.0 * s / L - 1.0;
    double pm1 = 1.0, p = x;
    if (order == 0) return 1.0;
    for (int n = 1; n < order; ++n) {
        const double pn1 = ((2.0 * n + 1.0) * x * p - n * pm1) / (n + 1.0);
        pm1 = p;
        p = pn1;
    }
    return p;
}

// d/ds of the rescaled Legendre polynomial.
inline double legendre_eval_deriv(int order, double s, double L) {
    if (order == 0) return 0.0;
    const double x = 2.0 * s / L - 1.0;
    // dP_{n}/dX via P'_{n+1} = P'_{n-1} + (2n+1) P_n
    double pm1 = 1.0, p = x;
    double dm1 = 0.0, d = 1.0;
    for (int n = 1; n < order; ++n) {
        const double pn1 = ((2.0 * n + 1.0) * x * p - n * pm1) / (n + 1.0);
        const double dn1 = dm1 + (2.0 * n + 1.0) * p;
        pm1 = p;
        p = pn1;
        dm1 = d;
        d = dn1;
    }
    return d * 2.0 / L;
}

// The four Appendix-style Hermite cubics on a segment [a, b] of a rod of
// length L, in the normalized coordinate sb = (s-a)/(b-a). p1 is zeroed when
// the segment touches s = 0 and p4 when it touches s = L (mixed boundary
// condition layout).
inline Eigen::Vector4d hermite_segment_eval(double a, double b, double L, double s) {
    if (s < a - 1e-12 || s > b + 1e-12)
        throw std::domain_error("hermite_segment_eval: s outside segment");
    const double sb = (s - a) / (b - a);
    const double sb2 = sb * sb, sb3 = sb2 * sb;
    Eigen::Vector4d p;
    p(0) = (a <= 0.0) ? 0.0 : 1.0 - 3.0 * sb2 + 2.0 * sb3;
    p(1) = sb - 2.0 * sb2 + sb3;
    p(2) = 3.0 * sb2 - 2.0 * sb3;
    p(3) = (b >= L) ? 0.0 : -sb2 + sb3;
    return p;
}

namespace detail {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
// Legendre roots.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double pm1 = 1.0, p = xi;
            for (int k = 1; k < n; ++k) {
                const double pk1 = ((2.0 * k + 1.0) * xi * p - k * pm1) / (k + 1.0);
                pm1 = p;
                p = pk1;
            }
            const double dp = n * (xi * p - pm1) / (xi * xi - 1.0);
            const double dx = p / dp;
            xi -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double pm1 = 1.0, p = xi;
        for (int k = 1; k < n; ++k) {
            const double pk1 = ((2.0 * k + 1.0) * xi * p - k * pm1) / (k + 1.0);
            pm1 = p;
            p = pk1;
        }
        const double dp = n * (xi * p - pm1) / (xi * xi - 1.0);
        x[n - 1 - i] = xi;
        w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
}

}  // namespace detail

// Composite Gauss-Legendre rule over [0, L] together with the propagation
// grid used by the kinematic recursion: interval bounds interleaved with the
// quadrature points, plus the two Zanna collocation arclengths of every
// propagation substep.
struct QuadratureRule {
    double L = 0.0;
    int n_intervals = 0;
    int points_per_interval = 0;

    std::vector<double> points;   // quadrature points, ascending
    std::vector<double> weights;  // matching weights, sum = L

    std::vector<double> prop_nodes;  // 0 .. L, interval bounds + quadrature points
    std::vector<int> quad_node;      // prop_nodes index of each quadrature point

    struct Substep {
        double sa, sb;  // propagation substep [sa, sb]
        double za, zb;  // Zanna collocation points sa + (1/2 -+ sqrt(3)/6) h
    };
    std::vector<Substep> substeps;  // prop_nodes.size() - 1 entries

    int n_points() const { return static_cast<int>(points.size()); }
};

inline QuadratureRule build_quadrature(int n_intervals, int points_per_interval, double L) {
    if (n_intervals < 1 || points_per_interval < 2)
        throw std::invalid_argument("build_quadrature: need >= 1 interval and >= 2 points");
    QuadratureRule rule;
    rule.L = L;
    rule.n_intervals = n_intervals;
    rule.points_per_interval = points_per_interval;

    std::vector<double> gx, gw;
    detail::gauss_legendre(points_per_interval, gx, gw);

    const double h = L / n_intervals;
    rule.prop_nodes.push_back(0.0);
    for (int i = 0; i < n_intervals; ++i) {
        const double a = i * h;
        for (int k = 0; k < points_per_interval; ++k) {
            const double s = a + 0.5 * h * (1.0 + gx[k]);
            rule.points.push_back(s);
            rule.weights.push_back(0.5 * h * gw[k]);
            rule.prop_nodes.push_back(s);
            rule.quad_node.push_back(static_cast<int>(rule.prop_nodes.size()) - 1);
        }
        rule.prop_nodes.push_back((i + 1) * h);
    }

    const double c = std::sqrt(3.0) / 6.0;
    for (size_t j = 0; j + 1 < rule.prop_nodes.size(); ++j) {
        QuadratureRule::Substep st;
        st.sa = rule.prop_nodes[j];
        st.sb = rule.prop_nodes[j + 1];
        const double w = st.sb - st.sa;
        st.za = st.sa + (0.5 - c) * w;
        st.zb = st.sa + (0.5 + c) * w;
        rule.substeps.push_back(st);
    }
    return rule;
}

// Legendre basis for the strain twist. Each of the six strain components
// carries polynomial degrees 0..order (order -1 switches the component off),
// laid out block-diagonally: every column is nonzero in exactly one row.
struct XiBasis {
    std::array<int, 6> orders = {-1, -1, -1, -1, -1, -1};  // k1 k2 k3 n1 n2 n3
    double L = 1.0;
    Vec6 xi_star = (Vec6() << 0, 0, 0, 0, 0, 1).finished();

    int n() const {
        int c = 0;
        for (int o : orders)
            if (o >= 0) c += o + 1;
        return c;
    }

    MatrixXd eval(double s) const {
        MatrixXd phi = MatrixXd::Zero(6, n());
        int col = 0;
        for (int row = 0; row < 6; ++row) {
            for (int d = 0; d <= orders[row]; ++d) phi(row, col++) = legendre_eval(d, s, L);
        }
        return phi;
    }

    MatrixXd eval_deriv(double s) const {
        MatrixXd dphi = MatrixXd::Zero(6, n());
        int col = 0;
        for (int row = 0; row < 6; ++row) {
            for (int d = 0; d <= orders[row]; ++d) dphi(row, col++) = legendre_eval_deriv(d, s, L);
        }
        return dphi;
    }

    Vec6 strain(const VectorXd& q, double s) const {
        if (q.size() != n()) throw std::invalid_argument("XiBasis: coordinate size mismatch");
        return eval(s) * q + xi_star;
    }

    Vec6 strain_rate(const VectorXd& qdot, double s) const {
        if (qdot.size() != n()) throw std::invalid_argument("XiBasis: coordinate size mismatch");
        return eval(s) * qdot;
    }
};

enum class RhoBC { Dirichlet, Neumann, Mixed };

inline RhoBC rho_bc_from_string(const std::string& s) {
    if (s == "dirichlet") return RhoBC::Dirichlet;
    if (s == "neumann") return RhoBC::Neumann;
    if (s == "mixed") return RhoBC::Mixed;
    throw std::invalid_argument("unknown rho boundary condition: " + s);
}

// Piecewise cubic Hermite basis for the inflation ratio on m uniform
// segments. Nodes carry (value, slope) degrees of freedom shared across
// breakpoints (C1 by construction); the boundary condition removes one DOF
// at each end, leaving n = 2m columns:
//   Dirichlet: end values fixed (rho = rho* at both ends)
//   Neumann:   end slopes fixed to zero (Q = 0 enforced strongly)
//   Mixed:     value fixed at s = 0, slope fixed at s = L
struct RhoBasis {
    int segments = 0;
    RhoBC bc = RhoBC::Neumann;
    double L = 1.0;
    double rho_star = 1.0;

    int n() const { return segments == 0 ? 0 : 2 * segments; }
    bool empty() const { return segments == 0; }

    // maps node DOF (node j value/slope) to a column index, or -1 if removed
    int dof_col(int node, bool slope) const {
        const int m = segments;
        int idx = 0;
        for (int j = 0; j <= m; ++j) {
            for (int k = 0; k < 2; ++k) {
                const bool is_slope = (k == 1);
                bool removed = false;
                if (j == 0) {
                    removed = (bc == RhoBC::Dirichlet && !is_slope) ||
                              (bc == RhoBC::Neumann && is_slope) ||
                              (bc == RhoBC::Mixed && !is_slope);
                } else if (j == m) {
                    removed = (bc == RhoBC::Dirichlet && !is_slope) ||
                              (bc == RhoBC::Neumann && is_slope) ||
                              (bc == RhoBC::Mixed && is_slope);
                }
                if (j == node && is_slope == slope) return removed ? -1 : idx;
                if (!removed) ++idx;
            }
        }
        return -1;
    }

    void eval(double s, RowVectorXd& phi, RowVectorXd& dphi) const {
        phi = RowVectorXd::Zero(n());
        dphi = RowVectorXd::Zero(n());
        if (empty()) return;
        if (s < -1e-12 * L || s > L * (1.0 + 1e-12))
            throw std::domain_error("RhoBasis: arclength outside [0, L]");
        const double w = L / segments;
        const double u = s * segments / L;
        const int seg = std::min(segments - 1, std::max(0, static_cast<int>(u)));
        const double sb = u - seg;
        const double sb2 = sb * sb, sb3 = sb2 * sb;
        const double h00 = 1.0 - 3.0 * sb2 + 2.0 * sb3, dh00 = (-6.0 * sb + 6.0 * sb2) / w;
        const double h10 = sb - 2.0 * sb2 + sb3, dh10 = (1.0 - 4.0 * sb + 3.0 * sb2) / w;
        const double h01 = 3.0 * sb2 - 2.0 * sb3, dh01 = (6.0 * sb - 6.0 * sb2) / w;
        const double h11 = -sb2 + sb3, dh11 = (-2.0 * sb + 3.0 * sb2) / w;
        // slope DOFs carry d(rho)/ds units, hence the segment-width scaling
        const struct {
            int node;
            bool slope;
            double v, dv;
        } entries[4] = {{seg, false, h00, dh00},
                        {seg, true, w * h10, w * dh10},
                        {seg + 1, false, h01, dh01},
                        {seg + 1, true, w * h11, w * dh11}};
        for (const auto& e : entries) {
            const int col = dof_col(e.node, e.slope);
            if (col >= 0) {
                phi(col) += e.v;
                dphi(col) += e.dv;
            }
        }
    }

    // (rho, rho') at s
    std::pair<double, double> inflation(const VectorXd& q, double s) const {
        if (q.size() != n()) throw std::invalid_argument("RhoBasis: coordinate size mismatch");
        if (empty()) return {rho_star, 0.0};
        RowVectorXd phi, dphi;
        eval(s, phi, dphi);
        return {phi.dot(q) + rho_star, dphi.dot(q)};
    }

    std::pair<double, double> inflation_rate(const VectorXd& qdot, double s) const {
        if (qdot.size() != n()) throw std::invalid_argument("RhoBasis: coordinate size mismatch");
        if (empty()) return {0.0, 0.0};
        RowVectorXd phi, dphi;
        eval(s, phi, dphi);
        return {phi.dot(qdot), dphi.dot(qdot)};
    }
};

}  // namespace cosserat
