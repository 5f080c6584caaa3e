#pragma once

// Signed complete graph K_{n+1} with a marked matching, its arcs, and the
// six-way arc partition used by the search analysis.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "signsearch/error.hpp"

namespace signsearch {

using Vertex = int;
using ArcId = std::size_t;

/// Directed copy of an edge: origin o(a) -> terminus t(a).
struct Arc {
    Vertex origin;
    Vertex terminus;

    friend bool operator==(const Arc&, const Arc&) = default;
};

/// Unordered vertex pair, normalised so that `lo < hi`.
struct Edge {
    Vertex lo;
    Vertex hi;

    Edge() = default;
    Edge(Vertex a, Vertex b) : lo(a < b ? a : b), hi(a < b ? b : a) {}

    friend bool operator==(const Edge&, const Edge&) = default;
};

enum class ArcClass : int { A1 = 0, A2, A3, A4, A5, A6 };

inline constexpr std::size_t kArcClassCount = 6;

using ClassCounts = std::array<std::size_t, kArcClassCount>;

constexpr std::size_t index_of(ArcClass c) { return static_cast<std::size_t>(c); }

inline constexpr int max_matching_size(int n) { return (n + 1) / 2; }

inline constexpr bool is_perfect_matching(int n, int t) {
    return t > 0 && n % 2 == 1 && t == (n + 1) / 2;
}

class SignedCompleteGraph {
public:
    SignedCompleteGraph(int n, std::vector<Edge> matching)
        : n_(n), matching_(std::move(matching)), partner_(static_cast<std::size_t>(std::max(n, 0) + 1), -1) {
        if (n < 1) {
            throw Error(ErrorCode::InvalidArgument, "n must be >= 1, got " + std::to_string(n));
        }
        if (static_cast<int>(matching_.size()) > max_matching_size(n)) {
            throw Error(ErrorCode::MatchingTooLarge,
                        "t=" + std::to_string(matching_.size()) + " exceeds floor((n+1)/2)=" +
                            std::to_string(max_matching_size(n)));
        }
        for (const Edge& e : matching_) {
            if (e.lo == e.hi || e.lo < 0 || e.hi > n) {
                throw Error(ErrorCode::InvalidArc, "matching pair (" + std::to_string(e.lo) + "," +
                                                       std::to_string(e.hi) + ") is not an edge of K_" +
                                                       std::to_string(n + 1));
            }
            for (Vertex v : {e.lo, e.hi}) {
                if (partner_[v] != -1) {
                    throw Error(ErrorCode::NotAMatching,
                                "vertex " + std::to_string(v) + " is covered twice");
                }
            }
            partner_[e.lo] = e.hi;
            partner_[e.hi] = e.lo;
        }
    }

    int n() const noexcept { return n_; }
    int t() const noexcept { return static_cast<int>(matching_.size()); }
    int vertex_count() const noexcept { return n_ + 1; }
    std::size_t arc_count() const noexcept {
        return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ + 1);
    }
    bool perfect() const noexcept { return is_perfect_matching(n_, t()); }

    const std::vector<Edge>& matching() const noexcept { return matching_; }

    bool valid_vertex(Vertex v) const noexcept { return v >= 0 && v <= n_; }

    /// Frozen layout: arc (u,v) lives at u*n + (v < u ? v : v-1).
    ArcId arc_index(Vertex u, Vertex v) const {
        if (!valid_vertex(u) || !valid_vertex(v) || u == v) {
            throw Error(ErrorCode::InvalidArc,
                        "(" + std::to_string(u) + "," + std::to_string(v) + ") is not an arc");
        }
        return unchecked_arc_index(u, v);
    }

    ArcId unchecked_arc_index(Vertex u, Vertex v) const noexcept {
        return static_cast<ArcId>(u) * static_cast<ArcId>(n_) + static_cast<ArcId>(v < u ? v : v - 1);
    }

    Arc arc(ArcId id) const {
        if (id >= arc_count()) {
            throw Error(ErrorCode::InvalidArc, "arc id " + std::to_string(id) + " out of range");
        }
        const auto u = static_cast<Vertex>(id / static_cast<ArcId>(n_));
        const auto r = static_cast<Vertex>(id % static_cast<ArcId>(n_));
        return {u, r < u ? r : r + 1};
    }

    ArcId inverse(ArcId id) const {
        const Arc a = arc(id);
        return unchecked_arc_index(a.terminus, a.origin);
    }

    /// Membership in the endpoint set of the marked matching.
    bool in_boundary(Vertex v) const noexcept { return partner_[static_cast<std::size_t>(v)] != -1; }

    /// Matched partner of `v`, or -1.
    Vertex partner(Vertex v) const noexcept { return partner_[static_cast<std::size_t>(v)]; }

    bool is_marked_edge(Vertex u, Vertex v) const noexcept {
        return u != v && valid_vertex(u) && valid_vertex(v) && partner_[static_cast<std::size_t>(u)] == v;
    }

private:
    int n_;
    std::vector<Edge> matching_;
    std::vector<Vertex> partner_;
};

/// Which arc of a marked edge carries sigma = -1.
enum class MarkedOrientation { LowerToHigher, HigherToLower };

/// Arc signs sigma; the edge sign tau is derived from them.
class SignAssignment {
public:
    SignAssignment(const SignedCompleteGraph& g, MarkedOrientation orientation)
        : sigma_(g.arc_count(), 1) {
        for (const Edge& e : g.matching()) {
            const ArcId negative = orientation == MarkedOrientation::LowerToHigher
                                       ? g.arc_index(e.lo, e.hi)
                                       : g.arc_index(e.hi, e.lo);
            sigma_[negative] = -1;
        }
    }

    int sigma(ArcId a) const { return sigma_.at(a); }

    /// a is in the negatively signed arc set.
    bool negative(ArcId a) const { return sigma_.at(a) < 0; }

    int tau(const SignedCompleteGraph& g, Vertex u, Vertex v) const {
        return sigma(g.arc_index(u, v)) * sigma(g.arc_index(v, u));
    }

    std::size_t negative_count() const {
        return static_cast<std::size_t>(std::count(sigma_.begin(), sigma_.end(), std::int8_t{-1}));
    }

    const std::vector<std::int8_t>& values() const noexcept { return sigma_; }

private:
    std::vector<std::int8_t> sigma_;
};

struct SignedInstance {
    SignedCompleteGraph graph;
    SignAssignment sign;
};

struct CanonicalPlacement {};

struct ExplicitPlacement {
    std::vector<Edge> pairs;
};

struct RandomPlacement {
    std::uint64_t seed = 0;
};

using Placement = std::variant<CanonicalPlacement, ExplicitPlacement, RandomPlacement>;

namespace detail {

// SplitMix64.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::vector<Edge> place_matching(int n, int t, const Placement& placement) {
    if (t < 0) throw Error(ErrorCode::InvalidArgument, "t must be non-negative");
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1, got " + std::to_string(n));
    if (t > max_matching_size(n)) {
        throw Error(ErrorCode::MatchingTooLarge, "t=" + std::to_string(t) + " exceeds floor((n+1)/2)=" +
                                                     std::to_string(max_matching_size(n)));
    }
    std::vector<Edge> pairs;
    if (std::holds_alternative<ExplicitPlacement>(placement)) {
        pairs = std::get<ExplicitPlacement>(placement).pairs;
        if (static_cast<int>(pairs.size()) != t) {
            throw Error(ErrorCode::InvalidArgument, "explicit placement has " +
                                                        std::to_string(pairs.size()) + " pairs, t=" +
                                                        std::to_string(t));
        }
    } else if (std::holds_alternative<RandomPlacement>(placement)) {
        std::vector<Vertex> order(static_cast<std::size_t>(n + 1));
        std::iota(order.begin(), order.end(), 0);
        std::uint64_t state = std::get<RandomPlacement>(placement).seed;
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(splitmix64(state) % (i + 1));
            std::swap(order[i], order[j]);
        }
        for (int i = 0; i < t; ++i) pairs.emplace_back(order[2 * i], order[2 * i + 1]);
    } else {
        for (int i = 0; i < t; ++i) pairs.emplace_back(2 * i, 2 * i + 1);
    }
    return pairs;
}

}  // namespace detail

inline SignedInstance build_signed_complete_graph(
    int n, int t, const Placement& placement = CanonicalPlacement{},
    MarkedOrientation orientation = MarkedOrientation::LowerToHigher) {
    SignedCompleteGraph g(n, detail::place_matching(n, t, placement));
    SignAssignment s(g, orientation);
    return {std::move(g), std::move(s)};
}

inline ArcClass classify_arc(const SignedCompleteGraph& g, const SignAssignment& s, ArcId a) {
    const Arc arc = g.arc(a);
    if (s.negative(a)) return ArcClass::A1;
    if (s.negative(g.inverse(a))) return ArcClass::A2;
    const bool head = g.in_boundary(arc.terminus);
    const bool tail = g.in_boundary(arc.origin);
    if (head && tail) return ArcClass::A3;
    if (head) return ArcClass::A4;
    if (tail) return ArcClass::A5;
    return ArcClass::A6;
}

inline ArcClass classify_arc(const SignedCompleteGraph& g, const SignAssignment& s, Vertex u, Vertex v) {
    return classify_arc(g, s, g.arc_index(u, v));
}

/// Closed-form class sizes (t, t, 4t(t-1), 2t(n+1-2t), 2t(n+1-2t), n^2+n+4t^2-4nt-2t).
inline ClassCounts class_counts(int n, int t) {
    const long long N = n, T = t;
    return {static_cast<std::size_t>(T),
            static_cast<std::size_t>(T),
            static_cast<std::size_t>(4 * T * (T - 1)),
            static_cast<std::size_t>(2 * T * (N + 1 - 2 * T)),
            static_cast<std::size_t>(2 * T * (N + 1 - 2 * T)),
            static_cast<std::size_t>(N * N + N + 4 * T * T - 4 * N * T - 2 * T)};
}

inline ClassCounts class_counts(const SignedCompleteGraph& g, const SignAssignment&) {
    return class_counts(g.n(), g.t());
}

/// Plain-text provenance line, e.g. "# graph n=4 t=1 matching=0-1".
inline std::string provenance_header(const SignedCompleteGraph& g) {
    std::ostringstream out;
    out << "# graph n=" << g.n() << " t=" << g.t() << " matching=";
    if (g.matching().empty()) out << "none";
    for (std::size_t i = 0; i < g.matching().size(); ++i) {
        if (i) out << ';';
        out << g.matching()[i].lo << '-' << g.matching()[i].hi;
    }
    out << '\n';
    return out.str();
}

}  // namespace signsearch
