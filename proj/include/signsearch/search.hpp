#pragma once

// Search protocol on the signed complete graph: uniform start, the beta
// basis, evolution to the peak step, finding probability and total cost.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "signsearch/graph.hpp"
#include "signsearch/spectral.hpp"
#include "signsearch/walk.hpp"

namespace signsearch {

inline ArcState uniform_state(const SignedCompleteGraph& g) {
    const auto m = static_cast<Eigen::Index>(g.arc_count());
    return ArcState::Constant(m, Complex(1.0 / std::sqrt(static_cast<double>(m)), 0.0));
}

/// Total probability on the marked edges: sum over both arcs of each edge.
inline double finding_probability(const SignedCompleteGraph& g, const ArcState& psi) {
    double total = 0.0;
    for (const Edge& e : g.matching()) {
        total += std::norm(psi[static_cast<Eigen::Index>(g.arc_index(e.lo, e.hi))]);
        total += std::norm(psi[static_cast<Eigen::Index>(g.arc_index(e.hi, e.lo))]);
    }
    return total;
}

inline int peak_step(double theta_m) {
    return static_cast<int>(std::floor(std::numbers::pi / (2.0 * theta_m)));
}

struct BetaStates {
    ArcState plus;
    ArcState minus;
};

enum class BetaKind { Plus, Minus };

/// Per-class amplitudes of beta_+ (real) or beta_- (imaginary), indexed by ArcClass.
inline std::array<Complex, kArcClassCount> beta_class_amplitudes(int n, int t, BetaKind kind) {
    if (t < 1) throw Error(ErrorCode::ZeroMatching, "beta states need t >= 1");
    const SpectralSummary sum = t_spectrum_closed_form(n, t);
    if (!(std::abs(sum.lambda_m) < 1.0 - 1e-12)) {
        throw Error(ErrorCode::DegenerateLift, "|lambda_m| = 1 has sin(theta_m) = 0");
    }
    const double rho = sum.rho;
    const double cs = std::cos(sum.theta_m);
    const double base = 1.0 / std::sqrt(static_cast<double>(n) * sum.c_n);
    if (kind == BetaKind::Plus) {
        const double pre = base / std::sin(sum.theta_m);
        return {pre * -rho * (1.0 + cs), pre * rho * (1.0 + cs), pre * rho * (1.0 - cs),
                pre * (rho - cs),        pre * (1.0 - rho * cs), pre * (1.0 - cs)};
    }
    const Complex i(0.0, 1.0);
    return {-i * rho * base, i * rho * base, -i * rho * base, -i * base, -i * rho * base, -i * base};
}

inline BetaStates beta_states(const SignedCompleteGraph& g, const SignAssignment& s) {
    if (g.t() < 1) throw Error(ErrorCode::ZeroMatching, "beta states need t >= 1");
    const auto plus = beta_class_amplitudes(g.n(), g.t(), BetaKind::Plus);
    const auto minus = beta_class_amplitudes(g.n(), g.t(), BetaKind::Minus);
    const auto m = static_cast<Eigen::Index>(g.arc_count());
    BetaStates out{ArcState(m), ArcState(m)};
    for (ArcId a = 0; a < g.arc_count(); ++a) {
        const std::size_t c = index_of(classify_arc(g, s, a));
        out.plus[static_cast<Eigen::Index>(a)] = plus[c];
        out.minus[static_cast<Eigen::Index>(a)] = minus[c];
    }
    return out;
}

/// |<u, beta_->| from the class sizes:
/// |(2t - 2nt) rho - (n^2 - 2nt + n)| / (n sqrt(c_n (n+1))).
inline double overlap_closed_form(int n, int t) {
    if (t < 1) throw Error(ErrorCode::ZeroMatching, "overlap needs t >= 1");
    const SpectralSummary sum = t_spectrum_closed_form(n, t);
    const double nd = n;
    const double numer = std::abs((2.0 * t - 2.0 * nd * t) * sum.rho - (nd * nd - 2.0 * nd * t + nd));
    return numer / (nd * std::sqrt(sum.c_n * (nd + 1.0)));
}

/// Closed-form finding probability of beta_+: 2t |rho (1 + cos) / (sqrt(n c_n) sin)|^2.
inline double finding_probability_closed_form(int n, int t) {
    if (t < 1) throw Error(ErrorCode::ZeroMatching, "needs t >= 1");
    const SpectralSummary sum = t_spectrum_closed_form(n, t);
    const double amp = sum.rho * (1.0 + std::cos(sum.theta_m)) /
                       (std::sqrt(static_cast<double>(n) * sum.c_n) * std::sin(sum.theta_m));
    return 2.0 * t * amp * amp;
}

/// FP(k) from the beta_- start, using that U acts on span{beta_+, beta_-} as
/// a rotation by theta_m: 2t rho^2 (sin k theta + sin (k+1) theta)^2 / (n c_n sin^2 theta).
inline double finding_probability_at_step(int n, int t, int k) {
    if (t < 1) throw Error(ErrorCode::ZeroMatching, "needs t >= 1");
    const SpectralSummary sum = t_spectrum_closed_form(n, t);
    const double th = sum.theta_m;
    const double amp = sum.rho * (std::sin(k * th) + std::sin((k + 1) * th)) /
                       (std::sqrt(static_cast<double>(n) * sum.c_n) * std::sin(th));
    return 2.0 * t * amp * amp;
}

enum class SearchStart { BetaMinus, Uniform };

struct SearchOptions {
    std::optional<int> steps;  // defaults to 2 k_f
    SearchStart start = SearchStart::BetaMinus;
    /// Called with (k, psi_k) for every recorded step, k = 0 included.
    std::function<void(int, const ArcState&)> observer;
};

struct SearchPoint {
    int step;
    double probability;
};

struct SearchTrace {
    int n = 0;
    int t = 0;
    SearchStart start = SearchStart::BetaMinus;
    double theta_m = 0.0;
    int k_f = 0;
    double overlap = 0.0;         // |<u, beta_->|
    double fp_n = 0.0;            // FP(k_f)
    double k_total = 0.0;         // k_f sqrt(1 / FP_n)
    int argmax_step = 0;          // argmax FP(k) over the recorded steps
    double peak_probability = 0.0;
    double fp_beta_plus = 0.0;    // FP of beta_+ itself
    double distance_to_i_beta_plus = 0.0;  // ||psi_{k_f} - i beta_+||
    double max_norm_drift = 0.0;  // max_k | ||psi_k||^2 - 1 |
    std::vector<SearchPoint> probs;
};

inline SearchTrace run_search(const SignedCompleteGraph& g, const SignAssignment& s,
                              const SearchOptions& options = {}) {
    if (g.t() < 1) throw Error(ErrorCode::ZeroMatching, "search needs t >= 1");
    const SpectralSummary sum = t_spectrum_closed_form(g.n(), g.t());
    if (!(std::abs(sum.lambda_m) < 1.0 - 1e-12)) {
        throw Error(ErrorCode::DegenerateLift, "|lambda_m| = 1 leaves no rotation");
    }

    SearchTrace trace;
    trace.n = g.n();
    trace.t = g.t();
    trace.start = options.start;
    trace.theta_m = sum.theta_m;
    trace.k_f = peak_step(sum.theta_m);
    const int steps = options.steps.value_or(2 * trace.k_f);
    if (steps < 0) throw Error(ErrorCode::InvalidArgument, "steps must be non-negative");

    const BetaStates beta = beta_states(g, s);
    const ArcState u = uniform_state(g);
    trace.overlap = std::abs(u.dot(beta.minus));  // Eigen's dot conjugates the left operand
    trace.fp_beta_plus = finding_probability(g, beta.plus);

    const SignedWalk walk(g, s);
    ArcState psi = options.start == SearchStart::BetaMinus ? beta.minus : u;
    const int last = std::max(steps, trace.k_f);
    trace.probs.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= last; ++k) {
        if (k > 0) walk.step(psi);
        trace.max_norm_drift = std::max(trace.max_norm_drift, std::abs(psi.squaredNorm() - 1.0));
        const double fp = finding_probability(g, psi);
        if (k == trace.k_f) {
            trace.fp_n = fp;
            trace.distance_to_i_beta_plus = (psi - Complex(0.0, 1.0) * beta.plus).norm();
        }
        if (k <= steps) {
            trace.probs.push_back({k, fp});
            if (fp > trace.peak_probability) {
                trace.peak_probability = fp;
                trace.argmax_step = k;
            }
            if (options.observer) options.observer(k, psi);
        }
    }
    trace.k_total = trace.k_f * std::sqrt(1.0 / trace.fp_n);
    return trace;
}

enum class FpMode { Simulated, ClosedForm };

struct Complexity {
    double theta_m = 0.0;
    int k_f = 0;
    double fp_n = 0.0;
    double k_total = 0.0;
};

inline Complexity total_complexity(int n, int t, FpMode mode = FpMode::Simulated) {
    if (t < 1) throw Error(ErrorCode::ZeroMatching, "search needs t >= 1");
    Complexity out;
    if (mode == FpMode::Simulated) {
        const SignedInstance inst = build_signed_complete_graph(n, t);
        SearchOptions options;
        options.steps = 0;
        const SearchTrace trace = run_search(inst.graph, inst.sign, options);
        out.theta_m = trace.theta_m;
        out.k_f = trace.k_f;
        out.fp_n = trace.fp_n;
    } else {
        const SpectralSummary sum = t_spectrum_closed_form(n, t);
        out.theta_m = sum.theta_m;
        out.k_f = peak_step(sum.theta_m);
        out.fp_n = finding_probability_at_step(n, t, out.k_f);
    }
    out.k_total = out.k_f * std::sqrt(1.0 / out.fp_n);
    return out;
}

}  // namespace signsearch
