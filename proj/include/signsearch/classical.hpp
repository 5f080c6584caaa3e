#pragma once

// Classical baseline: simple random walk on the line graph of K_{n+1} with the
// marked matching deleted, its closed-form top eigenvalue, and hitting times.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "signsearch/graph.hpp"
#include "signsearch/spectral.hpp"

namespace signsearch {

/// Largest n for which dense line-graph matrices are materialised.
inline constexpr int kDenseLineGraphLimit = 60;

/// Edges of K_{n+1} in lexicographic (lo, hi) order.
inline std::vector<Edge> complete_graph_edges(int n) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2);
    for (Vertex u = 0; u <= n; ++u) {
        for (Vertex v = u + 1; v <= n; ++v) edges.emplace_back(u, v);
    }
    return edges;
}

struct LineGraphWalk {
    int n = 0;
    int t = 0;
    std::vector<Edge> edges;
    std::vector<bool> marked;
    /// Neighbours of each edge in L(K_{n+1}): edges sharing exactly one endpoint.
    std::vector<std::vector<int>> neighbors;
    /// Surviving (unmarked) edge ids, in the row order of P_M.
    std::vector<int> unmarked;

    double step_probability() const { return 1.0 / (2.0 * (n - 1)); }
    std::size_t restricted_size() const { return unmarked.size(); }

    Eigen::MatrixXd transition_matrix() const {
        check_dense();
        const auto m = static_cast<Eigen::Index>(edges.size());
        Eigen::MatrixXd P = Eigen::MatrixXd::Zero(m, m);
        for (std::size_t e = 0; e < edges.size(); ++e) {
            for (int f : neighbors[e]) P(static_cast<Eigen::Index>(e), f) = step_probability();
        }
        return P;
    }

    /// P with the rows and columns of marked edges removed.
    Eigen::MatrixXd restricted_transition_matrix() const {
        check_dense();
        std::vector<int> row(edges.size(), -1);
        for (std::size_t i = 0; i < unmarked.size(); ++i) row[static_cast<std::size_t>(unmarked[i])] = static_cast<int>(i);
        const auto m = static_cast<Eigen::Index>(unmarked.size());
        Eigen::MatrixXd PM = Eigen::MatrixXd::Zero(m, m);
        for (std::size_t i = 0; i < unmarked.size(); ++i) {
            for (int f : neighbors[static_cast<std::size_t>(unmarked[i])]) {
                if (row[static_cast<std::size_t>(f)] >= 0) {
                    PM(static_cast<Eigen::Index>(i), row[static_cast<std::size_t>(f)]) = step_probability();
                }
            }
        }
        return PM;
    }

private:
    void check_dense() const {
        if (n > kDenseLineGraphLimit) {
            throw Error(ErrorCode::InvalidArgument, "dense line-graph matrices are limited to n <= " +
                                                        std::to_string(kDenseLineGraphLimit));
        }
    }
};

inline LineGraphWalk build_line_walk(const SignedCompleteGraph& g) {
    if (g.n() < 2) throw Error(ErrorCode::InvalidArgument, "line-graph walk needs n >= 2");
    LineGraphWalk w;
    w.n = g.n();
    w.t = g.t();
    w.edges = complete_graph_edges(g.n());
    w.marked.resize(w.edges.size());
    w.neighbors.resize(w.edges.size());
    std::vector<std::vector<int>> incident(static_cast<std::size_t>(g.vertex_count()));
    for (std::size_t e = 0; e < w.edges.size(); ++e) {
        const Edge& edge = w.edges[e];
        w.marked[e] = g.is_marked_edge(edge.lo, edge.hi);
        if (!w.marked[e]) w.unmarked.push_back(static_cast<int>(e));
        incident[static_cast<std::size_t>(edge.lo)].push_back(static_cast<int>(e));
        incident[static_cast<std::size_t>(edge.hi)].push_back(static_cast<int>(e));
    }
    for (std::size_t e = 0; e < w.edges.size(); ++e) {
        auto& nb = w.neighbors[e];
        nb.reserve(2 * static_cast<std::size_t>(g.n() - 1));
        for (Vertex end : {w.edges[e].lo, w.edges[e].hi}) {
            for (int f : incident[static_cast<std::size_t>(end)]) {
                if (f != static_cast<int>(e)) nb.push_back(f);
            }
        }
    }
    return w;
}

inline LineGraphWalk build_line_walk(int n, int t) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "line-graph walk needs n >= 2");
    return build_line_walk(build_signed_complete_graph(n, t).graph);
}

/// Explicit vertex/edge incidence B over the unmarked edges, (n+1) x (|E|-t).
inline Eigen::MatrixXd incidence_matrix(const SignedCompleteGraph& g) {
    std::vector<Edge> kept;
    for (const Edge& e : complete_graph_edges(g.n())) {
        if (!g.is_marked_edge(e.lo, e.hi)) kept.push_back(e);
    }
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(g.vertex_count(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) {
        B(kept[j].lo, static_cast<Eigen::Index>(j)) = 1.0;
        B(kept[j].hi, static_cast<Eigen::Index>(j)) = 1.0;
    }
    return B;
}

inline Eigen::MatrixXd incidence_matrix(int n, int t) {
    return incidence_matrix(build_signed_complete_graph(n, t).graph);
}

/// B B^T entrywise: n (or n-1 on matched vertices) on the diagonal, 1 off it,
/// 0 on matched pairs.
inline Eigen::MatrixXd incidence_gram(const SignedCompleteGraph& g) {
    const int n = g.n();
    Eigen::MatrixXd G(g.vertex_count(), g.vertex_count());
    for (Vertex u = 0; u <= n; ++u) {
        for (Vertex v = 0; v <= n; ++v) {
            if (u == v) {
                G(u, v) = g.in_boundary(u) ? n - 1 : n;
            } else {
                G(u, v) = g.is_marked_edge(u, v) ? 0.0 : 1.0;
            }
        }
    }
    return G;
}

inline Eigen::MatrixXd incidence_gram(int n, int t) {
    return incidence_gram(build_signed_complete_graph(n, t).graph);
}

inline Eigen::MatrixXd complete_adjacency(int r) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Ones(r, r);
    A.diagonal().setZero();
    return A;
}

/// A(CP(r)) = A(K_r) (x) J_2.
inline Eigen::MatrixXd cocktail_party_adjacency(int r) {
    const Eigen::MatrixXd K = complete_adjacency(r);
    Eigen::MatrixXd A(2 * r, 2 * r);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) A.block(2 * i, 2 * j, 2, 2).setConstant(K(i, j));
    }
    return A;
}

/// Block form [[A(CP(t)) + (n-1)I, J], [J, A(K_{n+1-2t}) + nI]] under canonical labels.
inline Eigen::MatrixXd incidence_gram_block_form(int n, int t) {
    detail::check_matching_size(n, t);
    const int inner = 2 * t;
    const int outer = n + 1 - 2 * t;
    Eigen::MatrixXd G = Eigen::MatrixXd::Ones(n + 1, n + 1);
    if (inner > 0) {
        G.topLeftCorner(inner, inner) =
            cocktail_party_adjacency(t) + (n - 1) * Eigen::MatrixXd::Identity(inner, inner);
    }
    if (outer > 0) {
        G.bottomRightCorner(outer, outer) =
            complete_adjacency(outer) + n * Eigen::MatrixXd::Identity(outer, outer);
    }
    return G;
}

/// B B^T restricted to span{1 on matched vertices, 1 on the rest}.
inline Eigen::Matrix2d quotient_matrix(int n, int t) {
    Eigen::Matrix2d Q;
    Q << n + 2 * t - 3, n + 1 - 2 * t, 2 * t, 2 * n - 2 * t;
    return Q;
}

struct MuSpectrum {
    double mu_plus = 0.0;
    double mu_minus = 0.0;
    Spectrum spectrum;  // of B B^T
};

inline MuSpectrum mu_closed_form(int n, int t) {
    detail::check_matching_size(n, t);
    if (t < 1) throw Error(ErrorCode::ZeroMatching, "closed-form mu needs t >= 1");
    const double nd = n;
    const double root = std::sqrt(nd * nd + 6.0 * nd + 9.0 - 16.0 * t);
    MuSpectrum out;
    out.mu_plus = (3.0 * nd - 3.0 + root) / 2.0;
    out.mu_minus = (3.0 * nd - 3.0 - root) / 2.0;
    out.spectrum = normalize_spectrum(
        {{nd - 3.0, t - 1}, {nd - 1.0, n - t}, {out.mu_minus, 1}, {out.mu_plus, 1}});
    return out;
}

/// Top eigenvalue of P_M: (mu_+ - 2) / (2(n-1)).
inline double mu_m_closed_form(int n, int t) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "needs n >= 2");
    return (mu_closed_form(n, t).mu_plus - 2.0) / (2.0 * (n - 1));
}

enum class HittingSolver { Auto, Direct, Iterative };

namespace detail {

// (I - P_M) x with P_M = (B^T B - 2I) / (2(n-1)); B x is a per-vertex sum.
inline Eigen::VectorXd absorbing_operator(const std::vector<Edge>& kept, int n, const Eigen::VectorXd& x) {
    Eigen::VectorXd vertex_sum = Eigen::VectorXd::Zero(n + 1);
    for (std::size_t j = 0; j < kept.size(); ++j) {
        vertex_sum[kept[j].lo] += x[static_cast<Eigen::Index>(j)];
        vertex_sum[kept[j].hi] += x[static_cast<Eigen::Index>(j)];
    }
    const double p = 1.0 / (2.0 * (n - 1));
    Eigen::VectorXd y(x.size());
    for (std::size_t j = 0; j < kept.size(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        const double neighbours = vertex_sum[kept[j].lo] + vertex_sum[kept[j].hi] - 2.0 * x[i];
        y[i] = x[i] - p * neighbours;
    }
    return y;
}

inline double hitting_time_direct(const SignedCompleteGraph& g) {
    const LineGraphWalk walk = build_line_walk(g);
    const Eigen::MatrixXd PM = walk.restricted_transition_matrix();
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(PM.rows(), PM.cols()) - PM;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::SingularSystem, "I - P_M is not positive definite");
    }
    const Eigen::VectorXd h = llt.solve(Eigen::VectorXd::Ones(PM.rows()));
    return h.mean();
}

// Unpreconditioned conjugate gradient; I - P_M is symmetric positive definite for t >= 1.
inline double hitting_time_iterative(const SignedCompleteGraph& g, double tol = 1e-10) {
    std::vector<Edge> kept;
    for (const Edge& e : complete_graph_edges(g.n())) {
        if (!g.is_marked_edge(e.lo, e.hi)) kept.push_back(e);
    }
    const auto m = static_cast<Eigen::Index>(kept.size());
    const Eigen::VectorXd b = Eigen::VectorXd::Ones(m);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd r = b;
    Eigen::VectorXd p = r;
    double rr = r.squaredNorm();
    const double target = tol * tol * b.squaredNorm();
    const Eigen::Index max_iter = 20 * m + 1000;
    for (Eigen::Index it = 0; it < max_iter && rr > target; ++it) {
        const Eigen::VectorXd Ap = absorbing_operator(kept, g.n(), p);
        const double pAp = p.dot(Ap);
        if (!(pAp > 0.0)) throw Error(ErrorCode::SingularSystem, "I - P_M lost definiteness");
        const double alpha = rr / pAp;
        x += alpha * p;
        r -= alpha * Ap;
        const double rr_next = r.squaredNorm();
        p = r + (rr_next / rr) * p;
        rr = rr_next;
    }
    if (rr > target) throw Error(ErrorCode::SingularSystem, "conjugate gradient did not converge");
    return x.mean();
}

}  // namespace detail

/// Expected number of steps to first reach a marked edge, starting uniformly
/// on the unmarked edges: mean of h with (I - P_M) h = 1.
inline double exact_hitting_time(const SignedCompleteGraph& g, HittingSolver solver = HittingSolver::Auto) {
    if (g.n() < 2) throw Error(ErrorCode::InvalidArgument, "line-graph walk needs n >= 2");
    if (g.t() < 1) throw Error(ErrorCode::SingularSystem, "nothing to hit when t = 0");
    const bool direct = solver == HittingSolver::Direct ||
                        (solver == HittingSolver::Auto && g.n() <= kDenseLineGraphLimit);
    return direct ? detail::hitting_time_direct(g) : detail::hitting_time_iterative(g);
}

inline double exact_hitting_time(int n, int t, HittingSolver solver = HittingSolver::Auto) {
    return exact_hitting_time(build_signed_complete_graph(n, t).graph, solver);
}

struct ClassicalWalkReport {
    int n = 0;
    int t = 0;
    double mu_plus = 0.0;
    double mu_minus = 0.0;
    double mu_m = 0.0;
    double est_hitting = 0.0;  // 1 / (1 - mu_m)
    std::optional<double> exact_hitting;
};

enum class ExactHitting { Never, UpToDenseLimit, Always };

inline ClassicalWalkReport hitting_time_estimate(int n, int t,
                                                 ExactHitting exact = ExactHitting::UpToDenseLimit) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "line-graph walk needs n >= 2");
    if (t < 1) throw Error(ErrorCode::ZeroMatching, "hitting time needs t >= 1");
    const MuSpectrum mu = mu_closed_form(n, t);
    ClassicalWalkReport report;
    report.n = n;
    report.t = t;
    report.mu_plus = mu.mu_plus;
    report.mu_minus = mu.mu_minus;
    report.mu_m = (mu.mu_plus - 2.0) / (2.0 * (n - 1));
    report.est_hitting = 1.0 / (1.0 - report.mu_m);
    if (exact == ExactHitting::Always || (exact == ExactHitting::UpToDenseLimit && n <= kDenseLineGraphLimit)) {
        report.exact_hitting = exact_hitting_time(n, t);
    }
    return report;
}

}  // namespace signsearch
