#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fdnet {

// B-spline system on [0, T]: clamped uniform knots, D basis functions of the
// given degree, plus the two Gram matrices that turn function-space geometry
// into coefficient quadratic forms:
//   gram(d,d')           = integral of phi_d * phi_d'
//   curvature_gram(d,d') = integral of phi_d'' * phi_d''
struct BasisSystem {
    int degree = 3;
    int num_basis = 0;            // D
    double domain_end = 1.0;      // T
    std::vector<double> knots;    // size D + degree + 1
    Eigen::MatrixXd gram;         // D x D, symmetric positive definite
    Eigen::MatrixXd curvature_gram;  // D x D, symmetric positive semidefinite
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on P_m.
inline void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(m, 0.0);
    weights.assign(m, 0.0);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(3.14159265358979323846 * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}.
            double p0 = 1.0, p1 = x;
            for (int k = 1; k < m; ++k) {
                double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
}

// Index s with knots[s] <= t < knots[s+1], restricted to the nonempty spans
// [degree, D-1]. Right-continuous at interior knots; t = T falls in the last
// span (left-continuous), which with clamped knots yields the endpoint rule.
inline int find_span(const BasisSystem& bs, double t) {
    int lo = bs.degree;
    int hi = bs.num_basis - 1;
    auto it = std::upper_bound(bs.knots.begin(), bs.knots.end(), t);
    int s = static_cast<int>(it - bs.knots.begin()) - 1;
    return std::clamp(s, lo, hi);
}

// All order-q basis values over bs.knots at t (q <= bs.degree), by the local
// triangular recurrence. Returns knots.size()-q-1 values; only the q+1 at
// [span-q, span] can be nonzero.
inline Eigen::VectorXd basis_values(const BasisSystem& bs, int q, double t) {
    const auto& knots = bs.knots;
    int count = static_cast<int>(knots.size()) - q - 1;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(count);
    int span = find_span(bs, t);
    std::vector<double> local(q + 1, 0.0), left(q + 1, 0.0), right(q + 1, 0.0);
    local[0] = 1.0;
    for (int j = 1; j <= q; ++j) {
        left[j] = t - knots[span + 1 - j];
        right[j] = knots[span + j] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            double temp = local[r] / (right[r + 1] + left[j - r]);
            local[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        local[j] = saved;
    }
    for (int r = 0; r <= q; ++r) out[span - q + r] = local[r];
    return out;
}

inline void check_domain(const BasisSystem& bs, double t) {
    if (!(t >= 0.0 && t <= bs.domain_end))
        throw std::domain_error("t outside basis domain [0, " + std::to_string(bs.domain_end) + "]");
}

}  // namespace detail

// Basis values (phi_1(t), ..., phi_D(t)). Nonnegative, sum to 1, at most
// degree+1 nonzero.
inline Eigen::VectorXd eval_basis(const BasisSystem& bs, double t) {
    detail::check_domain(bs, t);
    return detail::basis_values(bs, bs.degree, t);
}

// Second derivatives (phi_1''(t), ..., phi_D''(t)) via the derivative
// recurrence applied twice to the order-(degree-2) values. Zero vector for
// degree < 2 (piecewise constant/linear).
inline Eigen::VectorXd eval_basis_second_derivative(const BasisSystem& bs, double t) {
    detail::check_domain(bs, t);
    const int D = bs.num_basis;
    const int p = bs.degree;
    if (p < 2) return Eigen::VectorXd::Zero(D);
    const auto& knots = bs.knots;
    Eigen::VectorXd base = detail::basis_values(bs, p - 2, t);  // D+2 values
    // First derivative of the order-(p-1) functions; 0/0 spans contribute 0.
    Eigen::VectorXd d1 = Eigen::VectorXd::Zero(D + 1);
    for (int i = 0; i <= D; ++i) {
        double acc = 0.0;
        double den = knots[i + p - 1] - knots[i];
        if (den > 0.0) acc += base[i] / den;
        den = knots[i + p] - knots[i + 1];
        if (den > 0.0) acc -= base[i + 1] / den;
        d1[i] = (p - 1) * acc;
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(D);
    for (int i = 0; i < D; ++i) {
        double acc = 0.0;
        double den = knots[i + p] - knots[i];
        if (den > 0.0) acc += d1[i] / den;
        den = knots[i + p + 1] - knots[i + 1];
        if (den > 0.0) acc -= d1[i + 1] / den;
        out[i] = p * acc;
    }
    return out;
}

// Both Gram matrices by per-span Gauss-Legendre with `nodes_per_span` nodes.
// The default degree+1 nodes integrate products of degree-2*degree piecewise
// polynomials exactly (Phi needs degree+1; Phi2's integrand has degree
// 2*(degree-2), cheaper still). Symmetry is forced; entries with
// |d-d'| > degree are exact zeros by support disjointness.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> compute_gram_matrices(const BasisSystem& bs,
                                                                         int nodes_per_span) {
    const int D = bs.num_basis;
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(D, D);
    Eigen::MatrixXd phi2 = Eigen::MatrixXd::Zero(D, D);
    std::vector<double> gx, gw;
    detail::gauss_legendre(nodes_per_span, gx, gw);
    for (int s = bs.degree; s < D; ++s) {
        double a = bs.knots[s];
        double b = bs.knots[s + 1];
        if (!(b > a)) continue;
        double mid = 0.5 * (a + b);
        double half = 0.5 * (b - a);
        for (int q = 0; q < nodes_per_span; ++q) {
            double t = mid + half * gx[q];
            double w = half * gw[q];
            Eigen::VectorXd v = detail::basis_values(bs, bs.degree, t);
            phi.noalias() += w * v * v.transpose();
            if (bs.degree >= 2) {
                Eigen::VectorXd v2 = eval_basis_second_derivative(bs, t);
                phi2.noalias() += w * v2 * v2.transpose();
            }
        }
    }
    phi = ((phi + phi.transpose()) / 2.0).eval();
    phi2 = ((phi2 + phi2.transpose()) / 2.0).eval();
    // Clamp the beyond-bandwidth entries to exact zeros (quadrature noise).
    for (int d = 0; d < D; ++d)
        for (int e = 0; e < D; ++e)
            if (std::abs(d - e) > bs.degree) {
                phi(d, e) = 0.0;
                phi2(d, e) = 0.0;
            }
    return {phi, phi2};
}

// Clamped uniform B-spline system on [0, T] with D functions of the given
// degree. Boundary knots repeat degree+1 times; the D-degree interior spans
// have equal width.
inline BasisSystem make_basis(double T, int D, int degree) {
    if (!(T > 0.0)) throw std::invalid_argument("make_basis: T must be positive");
    if (degree < 0) throw std::invalid_argument("make_basis: degree must be nonnegative");
    if (D < degree + 1) throw std::invalid_argument("make_basis: D must be at least degree+1");
    BasisSystem bs;
    bs.degree = degree;
    bs.num_basis = D;
    bs.domain_end = T;
    bs.knots.resize(D + degree + 1);
    int spans = D - degree;
    for (int i = 0; i < static_cast<int>(bs.knots.size()); ++i) {
        int q = std::clamp(i - degree, 0, spans);
        bs.knots[i] = T * static_cast<double>(q) / static_cast<double>(spans);
    }
    auto [phi, phi2] = compute_gram_matrices(bs, degree + 1);
    bs.gram = std::move(phi);
    bs.curvature_gram = std::move(phi2);
    return bs;
}

inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gram_matrices(const BasisSystem& bs) {
    return {bs.gram, bs.curvature_gram};
}

}  // namespace fdnet
