#pragma once

// Arc-space operators of the signed walk: shift S, boundary d, coboundary d*,
// the evolution U = S(2 d* d - I) applied matrix-free, and the vertex-space
// matrix T = d S d*.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "signsearch/graph.hpp"

namespace signsearch {

using Complex = std::complex<double>;
using ArcState = Eigen::VectorXcd;
using VertexVector = Eigen::VectorXcd;

class SignedWalk {
public:
    SignedWalk(const SignedCompleteGraph& g, const SignAssignment& s)
        : n_(g.n()), arcs_(g.arc_count()), inverse_(arcs_), weight_(arcs_) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
        for (ArcId a = 0; a < arcs_; ++a) {
            inverse_[a] = g.inverse(a);
            weight_[a] = s.negative(a) ? -scale : scale;
        }
    }

    int n() const noexcept { return n_; }
    int vertex_count() const noexcept { return n_ + 1; }
    std::size_t arc_count() const noexcept { return arcs_; }

    /// w(a) = -1/sqrt(deg t(a)) on negatively signed arcs, +1/sqrt(deg t(a)) otherwise.
    double weight(ArcId a) const { return weight_[a]; }
    ArcId inverse(ArcId a) const { return inverse_[a]; }

    ArcState shift(const ArcState& psi) const {
        check_arc_state(psi);
        ArcState out(psi.size());
        for (ArcId a = 0; a < arcs_; ++a) out[static_cast<Eigen::Index>(a)] = psi[idx(inverse_[a])];
        return out;
    }

    VertexVector boundary(const ArcState& psi) const {
        check_arc_state(psi);
        VertexVector out = VertexVector::Zero(vertex_count());
        accumulate_boundary(psi, out);
        return out;
    }

    ArcState coboundary(const VertexVector& f) const {
        if (f.size() != vertex_count()) {
            throw Error(ErrorCode::InvalidArgument, "vertex vector has wrong length");
        }
        ArcState out(static_cast<Eigen::Index>(arcs_));
        ArcId a = 0;
        for (Vertex u = 0; u <= n_; ++u) {
            for (Vertex v = 0; v <= n_; ++v) {
                if (v == u) continue;
                out[idx(a)] = weight_[a] * f[v];
                ++a;
            }
        }
        return out;
    }

    /// 2 d* d - I, a self-adjoint involution.
    ArcState reflect(const ArcState& psi) const {
        return 2.0 * coboundary(boundary(psi)) - psi;
    }

    /// One step psi <- U psi, in place: one boundary pass, then a fused
    /// coboundary/axpy/swap over inverse-arc pairs.
    void step(ArcState& psi) const {
        check_arc_state(psi);
        VertexVector g = VertexVector::Zero(vertex_count());
        accumulate_boundary(psi, g);
        for (Vertex u = 0; u <= n_; ++u) {
            for (Vertex v = u + 1; v <= n_; ++v) {
                const ArcId a = arc_id(u, v);
                const ArcId b = arc_id(v, u);
                const Complex ra = 2.0 * weight_[a] * g[v] - psi[idx(a)];
                const Complex rb = 2.0 * weight_[b] * g[u] - psi[idx(b)];
                psi[idx(a)] = rb;
                psi[idx(b)] = ra;
            }
        }
    }

    ArcState apply(const ArcState& psi) const {
        ArcState out = psi;
        step(out);
        return out;
    }

    /// U^dagger = (2 d* d - I) S.
    ArcState apply_adjoint(const ArcState& psi) const { return reflect(shift(psi)); }

    /// Dense T: tau(uv)/n off the diagonal, zero on it.
    Eigen::MatrixXd transfer_matrix() const {
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(vertex_count(), vertex_count());
        for (Vertex u = 0; u <= n_; ++u) {
            for (Vertex v = 0; v <= n_; ++v) {
                if (u == v) continue;
                // (d S d*)_{u,v} collects the single arc (v,u): w((v,u)) * w((u,v)).
                T(u, v) = weight_[arc_id(v, u)] * weight_[arc_id(u, v)];
            }
        }
        return T;
    }

private:
    static Eigen::Index idx(ArcId a) { return static_cast<Eigen::Index>(a); }

    ArcId arc_id(Vertex u, Vertex v) const {
        return static_cast<ArcId>(u) * static_cast<ArcId>(n_) + static_cast<ArcId>(v < u ? v : v - 1);
    }

    void check_arc_state(const ArcState& psi) const {
        if (static_cast<std::size_t>(psi.size()) != arcs_) {
            throw Error(ErrorCode::InvalidArgument, "arc state has length " + std::to_string(psi.size()) +
                                                        ", expected " + std::to_string(arcs_));
        }
    }

    void accumulate_boundary(const ArcState& psi, VertexVector& out) const {
        ArcId a = 0;
        for (Vertex u = 0; u <= n_; ++u) {
            for (Vertex v = 0; v <= n_; ++v) {
                if (v == u) continue;
                out[v] += weight_[a] * psi[idx(a)];
                ++a;
            }
        }
    }

    int n_;
    std::size_t arcs_;
    std::vector<ArcId> inverse_;
    std::vector<double> weight_;
};

inline ArcState apply_shift(const SignedCompleteGraph& g, const SignAssignment& s, const ArcState& psi) {
    return SignedWalk(g, s).shift(psi);
}

inline VertexVector apply_boundary(const SignedCompleteGraph& g, const SignAssignment& s,
                                   const ArcState& psi) {
    return SignedWalk(g, s).boundary(psi);
}

inline ArcState apply_coboundary(const SignedCompleteGraph& g, const SignAssignment& s,
                                 const VertexVector& f) {
    return SignedWalk(g, s).coboundary(f);
}

inline ArcState apply_U(const SignedCompleteGraph& g, const SignAssignment& s, const ArcState& psi) {
    return SignedWalk(g, s).apply(psi);
}

inline ArcState apply_U_adjoint(const SignedCompleteGraph& g, const SignAssignment& s,
                                const ArcState& psi) {
    return SignedWalk(g, s).apply_adjoint(psi);
}

inline Eigen::MatrixXd build_T(const SignedCompleteGraph& g, const SignAssignment& s) {
    return SignedWalk(g, s).transfer_matrix();
}

/// Indicator state of one arc.
inline ArcState arc_indicator(const SignedCompleteGraph& g, ArcId a) {
    ArcState e = ArcState::Zero(static_cast<Eigen::Index>(g.arc_count()));
    e[static_cast<Eigen::Index>(a)] = 1.0;
    return e;
}

}  // namespace signsearch
