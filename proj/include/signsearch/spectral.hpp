#pragma once

// Closed-form spectrum of T for a marked t-matching on K_{n+1}, its principal
// eigenvector, the lift of T-eigenpairs to U-eigenpairs, and a dense
// eigensolver used as the numeric cross-check.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "signsearch/graph.hpp"
#include "signsearch/walk.hpp"

namespace signsearch {

struct EigenvalueMultiplicity {
    double value;
    int multiplicity;
};

using Spectrum = std::vector<EigenvalueMultiplicity>;

inline constexpr double kClusterTolerance = 1e-7;

/// Sorts ascending and merges values closer than `tol` to their neighbour.
inline Spectrum cluster_eigenvalues(std::vector<double> values, double tol = kClusterTolerance) {
    std::sort(values.begin(), values.end());
    Spectrum out;
    double sum = 0.0;
    double last = 0.0;
    for (double v : values) {
        if (!out.empty() && v - last <= tol) {
            ++out.back().multiplicity;
            sum += v;
            out.back().value = sum / out.back().multiplicity;
        } else {
            out.push_back({v, 1});
            sum = v;
        }
        last = v;
    }
    return out;
}

/// Expands (value, multiplicity) pairs and re-clusters, so coincident entries merge.
inline Spectrum normalize_spectrum(const Spectrum& raw, double tol = kClusterTolerance) {
    std::vector<double> values;
    for (const auto& [value, mult] : raw) values.insert(values.end(), static_cast<std::size_t>(mult), value);
    return cluster_eigenvalues(std::move(values), tol);
}

inline int total_multiplicity(const Spectrum& spectrum) {
    int total = 0;
    for (const auto& e : spectrum) total += e.multiplicity;
    return total;
}

/// Multiset equality: same clusters, equal multiplicities, values within `tol`.
inline bool same_spectrum(const Spectrum& a, const Spectrum& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].multiplicity != b[i].multiplicity) return false;
        if (std::abs(a[i].value - b[i].value) > tol) return false;
    }
    return true;
}

struct SpectralSummary {
    int n = 0;
    int t = 0;
    bool perfect = false;
    Spectrum eigenvalues;
    double s = 0.0;         // n - 4t + 2
    double delta = 0.0;     // (n+1)^2 + 4s
    double a_t = std::numeric_limits<double>::quiet_NaN();
    double b_t = 0.0;
    double rho = std::numeric_limits<double>::quiet_NaN();
    double c_n = std::numeric_limits<double>::quiet_NaN();
    double lambda_m = 0.0;  // b_t / n
    double theta_m = 0.0;   // arccos(lambda_m)
};

namespace detail {

inline void check_matching_size(int n, int t) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    if (t < 0) throw Error(ErrorCode::InvalidArgument, "t must be non-negative");
    if (t > max_matching_size(n)) {
        throw Error(ErrorCode::MatchingTooLarge, "t=" + std::to_string(t) + " exceeds floor((n+1)/2)=" +
                                                     std::to_string(max_matching_size(n)));
    }
}

}  // namespace detail

inline SpectralSummary t_spectrum_closed_form(int n, int t) {
    detail::check_matching_size(n, t);
    SpectralSummary out;
    out.n = n;
    out.t = t;
    const double nd = n;
    out.s = nd - 4.0 * t + 2.0;
    out.delta = (nd + 1.0) * (nd + 1.0) + 4.0 * out.s;

    if (t == 0) {
        // Unsigned K_{n+1}: adjacency spectrum {n}^1 u {-1}^n, scaled by 1/n.
        out.b_t = nd;
        out.lambda_m = 1.0;
        out.theta_m = 0.0;
        out.eigenvalues = normalize_spectrum({{1.0, 1}, {-1.0 / nd, n}});
        return out;
    }

    const double root = std::sqrt(out.delta);
    if (is_perfect_matching(n, t)) {
        out.perfect = true;
        out.b_t = nd - 2.0;
        out.rho = 1.0;
        out.c_n = nd + 1.0;
        out.eigenvalues = normalize_spectrum({{-3.0 / nd, t - 1}, {1.0 / nd, t}, {out.b_t / nd, 1}});
    } else {
        out.a_t = (nd - 3.0 - root) / 2.0;
        out.b_t = (nd - 3.0 + root) / 2.0;
        out.rho = (-(out.s + 1.0) + root) / (4.0 * t);
        out.c_n = 2.0 * t * out.rho * out.rho + nd + 1.0 - 2.0 * t;
        out.eigenvalues = normalize_spectrum({{-3.0 / nd, t - 1},
                                              {out.a_t / nd, 1},
                                              {-1.0 / nd, n - 2 * t},
                                              {1.0 / nd, t},
                                              {out.b_t / nd, 1}});
    }
    out.lambda_m = out.b_t / nd;
    out.theta_m = std::acos(std::clamp(out.lambda_m, -1.0, 1.0));
    return out;
}

/// Unit eigenvector of T for lambda_m: rho_n/sqrt(c_n) on matched vertices,
/// 1/sqrt(c_n) elsewhere. Works for any placement of the matching.
inline Eigen::VectorXd principal_eigenvector(const SignedCompleteGraph& g) {
    if (g.t() == 0) throw Error(ErrorCode::ZeroMatching, "principal eigenvector needs t >= 1");
    const SpectralSummary sum = t_spectrum_closed_form(g.n(), g.t());
    const double scale = 1.0 / std::sqrt(sum.c_n);
    Eigen::VectorXd f(g.vertex_count());
    for (Vertex v = 0; v <= g.n(); ++v) f[v] = (g.in_boundary(v) ? sum.rho : 1.0) * scale;
    return f;
}

inline Eigen::VectorXd principal_eigenvector(int n, int t) {
    detail::check_matching_size(n, t);
    if (t == 0) throw Error(ErrorCode::ZeroMatching, "principal eigenvector needs t >= 1");
    return principal_eigenvector(build_signed_complete_graph(n, t).graph);
}

struct WalkEigenpair {
    double phase = 0.0;  // +theta or -theta
    ArcState eigenvector;

    Complex eigenvalue() const { return std::polar(1.0, phase); }
};

/// Lifts a unit T-eigenpair (lambda, f) with |lambda| < 1 to the two unit
/// U-eigenvectors for e^{+i theta} and e^{-i theta}, theta = arccos(lambda):
///   phi = (d* f - e^{+-i theta} S d* f) / (sqrt(2) |sin theta|).
inline std::pair<WalkEigenpair, WalkEigenpair> lift_to_walk(const SignedCompleteGraph& g,
                                                            const SignAssignment& s, double lambda,
                                                            const VertexVector& f) {
    if (!(std::abs(lambda) < 1.0 - 1e-12)) {
        throw Error(ErrorCode::DegenerateLift, "|lambda| = 1 has sin(theta) = 0");
    }
    const SignedWalk walk(g, s);
    const double theta = std::acos(lambda);
    const ArcState lifted = walk.coboundary(f);
    const ArcState shifted = walk.shift(lifted);
    const double norm = 1.0 / (std::sqrt(2.0) * std::abs(std::sin(theta)));
    auto make = [&](double phase) {
        return WalkEigenpair{phase, (norm * (lifted - std::polar(1.0, phase) * shifted)).eval()};
    };
    return {make(theta), make(-theta)};
}

inline std::pair<WalkEigenpair, WalkEigenpair> lift_to_walk(const SignedCompleteGraph& g,
                                                            const SignAssignment& s, double lambda,
                                                            const Eigen::VectorXd& f) {
    return lift_to_walk(g, s, lambda, VertexVector(f.cast<Complex>()));
}

/// Per-class amplitudes of the principal walk eigenvector for e^{sign*i*theta_m},
/// indexed by ArcClass.
inline std::array<Complex, kArcClassCount> walk_eigenvector_class_amplitudes(int n, int t, int sign) {
    if (t == 0) throw Error(ErrorCode::ZeroMatching, "needs t >= 1");
    const SpectralSummary sum = t_spectrum_closed_form(n, t);
    const double rho = sum.rho;
    const Complex e = std::polar(1.0, sign >= 0 ? sum.theta_m : -sum.theta_m);
    const double pre = 1.0 / (std::sqrt(2.0 * n * sum.c_n) * std::sin(sum.theta_m));
    return {pre * (-rho * (1.0 + e)), pre * (rho * (1.0 + e)), pre * (rho * (1.0 - e)),
            pre * (rho - e),          pre * (1.0 - rho * e),   pre * (1.0 - e)};
}

/// Full symmetric eigendecomposition, clustered into a multiset.
inline Spectrum numeric_t_spectrum(const Eigen::MatrixXd& T, double cluster_tol = kClusterTolerance) {
    if (T.rows() != T.cols()) throw Error(ErrorCode::NonSymmetric, "matrix is not square");
    const double scale = std::max(1.0, T.cwiseAbs().maxCoeff());
    if ((T - T.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw Error(ErrorCode::NonSymmetric, "matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(T, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NonSymmetric, "eigensolver failed");
    const Eigen::VectorXd& ev = solver.eigenvalues();
    return cluster_eigenvalues(std::vector<double>(ev.data(), ev.data() + ev.size()), cluster_tol);
}

}  // namespace signsearch
