#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "signsearch/classical.hpp"

using namespace signsearch;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Line-graph adjacency straight from the definition: two distinct edges are
// adjacent iff they share exactly one endpoint.
Eigen::MatrixXd line_adjacency_oracle(const std::vector<Edge>& edges) {
    const auto m = static_cast<Eigen::Index>(edges.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            if (i == j) continue;
            const Edge& a = edges[static_cast<std::size_t>(i)];
            const Edge& b = edges[static_cast<std::size_t>(j)];
            const int shared = (a.lo == b.lo) + (a.lo == b.hi) + (a.hi == b.lo) + (a.hi == b.hi);
            A(i, j) = shared == 1 ? 1.0 : 0.0;
        }
    }
    return A;
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

// Top eigenvalue of a nonnegative irreducible symmetric matrix by power
// iteration from the all-ones vector.
double perron_eigenvalue(const Eigen::MatrixXd& M) {
    Eigen::VectorXd x = Eigen::VectorXd::Ones(M.rows()).normalized();
    double lambda = 0.0;
    for (int it = 0; it < 10000; ++it) {
        const Eigen::VectorXd y = M * x;
        const double next = x.dot(y);
        x = y.normalized();
        if (std::abs(next - lambda) < 1e-15) break;
        lambda = next;
    }
    return lambda;
}

}  // namespace

TEST_CASE("line graph of K3 and K5", "[classical]") {
    const LineGraphWalk k3 = build_line_walk(2, 0);
    const Eigen::MatrixXd P3 = k3.transition_matrix();
    CHECK((P3 - 0.5 * line_adjacency_oracle(k3.edges)).norm() == 0.0);
    CHECK((P3.rowwise().sum() - Eigen::VectorXd::Ones(3)).norm() < 1e-15);

    const LineGraphWalk k5 = build_line_walk(4, 1);
    for (const auto& nb : k5.neighbors) CHECK(nb.size() == 6);
    const Eigen::MatrixXd PM = k5.restricted_transition_matrix();
    REQUIRE(PM.rows() == 9);
    int deficient = 0;
    for (Eigen::Index i = 0; i < PM.rows(); ++i) {
        const double row = PM.row(i).sum();
        const Edge& e = k5.edges[static_cast<std::size_t>(k5.unmarked[static_cast<std::size_t>(i)])];
        const bool touches = e.lo <= 1 || e.hi <= 1;
        CHECK_THAT(row, WithinAbs(touches ? 5.0 / 6.0 : 1.0, 1e-15));
        deficient += touches;
    }
    CHECK(deficient == 6);
}

TEST_CASE("transition matrix matches definition", "[classical][oracle]") {
    for (int n : {2, 3, 6, 11}) {
        for (int t = 0; t <= max_matching_size(n); ++t) {
            const auto inst = build_signed_complete_graph(n, t, RandomPlacement{std::uint64_t(n * t + 1)});
            const LineGraphWalk w = build_line_walk(inst.graph);
            const Eigen::MatrixXd A = line_adjacency_oracle(w.edges);
            CHECK((w.transition_matrix() - A / (2.0 * (n - 1))).norm() < 1e-15);
            const Eigen::MatrixXd PM = w.restricted_transition_matrix();
            for (Eigen::Index i = 0; i < PM.rows(); ++i) {
                const double lost = 1.0 - PM.row(i).sum();
                const double k = lost * 2.0 * (n - 1);
                CHECK_THAT(k, WithinAbs(std::round(k), 1e-9));
                CHECK(std::round(k) <= 2.0);
            }
        }
    }
}

TEST_CASE("incidence gram", "[classical]") {
    const Eigen::MatrixXd G = incidence_gram(4, 1);
    CHECK(G(0, 0) == 3.0);
    CHECK(G(1, 1) == 3.0);
    CHECK(G(2, 2) == 4.0);
    CHECK(G(0, 1) == 0.0);
    CHECK(G(0, 2) == 1.0);

    const Eigen::MatrixXd perfect = incidence_gram(5, 3);
    CHECK((perfect - (cocktail_party_adjacency(3) + 4.0 * Eigen::MatrixXd::Identity(6, 6))).norm() == 0.0);

    for (int n = 2; n <= 40; n += 3) {
        for (int t = 0; t <= max_matching_size(n); ++t) {
            const Eigen::MatrixXd B = incidence_matrix(n, t);
            CHECK(B.cols() == n * (n + 1) / 2 - t);
            const Eigen::MatrixXd BBt = B * B.transpose();
            CHECK((BBt - incidence_gram(n, t)).norm() == 0.0);
            CHECK((BBt - incidence_gram_block_form(n, t)).norm() == 0.0);
        }
    }
}

TEST_CASE("line graph adjacency is B^T B - 2I", "[classical][oracle]") {
    for (int n = 2; n <= 20; n += 2) {
        for (int t : {0, 1, max_matching_size(n)}) {
            const auto inst = build_signed_complete_graph(n, t);
            const LineGraphWalk w = build_line_walk(inst.graph);
            std::vector<Edge> kept;
            for (int e : w.unmarked) kept.push_back(w.edges[static_cast<std::size_t>(e)]);
            const Eigen::MatrixXd B = incidence_matrix(inst.graph);
            const Eigen::MatrixXd lhs = B.transpose() * B - 2.0 * Eigen::MatrixXd::Identity(B.cols(), B.cols());
            CHECK((lhs - line_adjacency_oracle(kept)).norm() == 0.0);
            if (n <= 12) {
                CHECK((w.restricted_transition_matrix() - lhs / (2.0 * (n - 1))).norm() < 1e-15);
            }
        }
    }
}

TEST_CASE("nonzero spectra of B B^T and B^T B coincide", "[classical][property]") {
    for (int n : {3, 6, 9, 14}) {
        for (int t = 1; t <= max_matching_size(n); t += 2) {
            const Eigen::MatrixXd B = incidence_matrix(n, t);
            auto nonzero = [](std::vector<double> v) {
                std::vector<double> out;
                for (double x : v) {
                    if (std::abs(x) > 1e-9) out.push_back(x);
                }
                return out;
            };
            const auto small = nonzero(sorted_eigenvalues(B * B.transpose()));
            const auto large = nonzero(sorted_eigenvalues(B.transpose() * B));
            REQUIRE(small.size() == large.size());
            for (std::size_t i = 0; i < small.size(); ++i) CHECK_THAT(small[i], WithinAbs(large[i], 1e-9));
        }
    }
}

TEST_CASE("closed-form mu spectrum", "[classical]") {
    const MuSpectrum k5 = mu_closed_form(4, 1);
    CHECK_THAT(k5.mu_plus, WithinAbs((9.0 + std::sqrt(33.0)) / 2.0, 1e-14));
    CHECK_THAT(k5.mu_minus, WithinAbs((9.0 - std::sqrt(33.0)) / 2.0, 1e-14));
    CHECK_THAT(mu_m_closed_form(4, 1), WithinAbs(0.89538, 1e-5));

    const MuSpectrum perfect = mu_closed_form(5, 3);
    CHECK_THAT(perfect.mu_plus, WithinAbs(8.0, 1e-14));

    for (int n = 2; n <= 40; ++n) {
        for (int t = 1; t <= max_matching_size(n); ++t) {
            const MuSpectrum mu = mu_closed_form(n, t);
            const auto numeric = cluster_eigenvalues(sorted_eigenvalues(incidence_gram(n, t)));
            INFO("n=" << n << " t=" << t);
            CHECK(total_multiplicity(mu.spectrum) == n + 1);
            CHECK(same_spectrum(mu.spectrum, numeric, 1e-9));

            Eigen::EigenSolver<Eigen::Matrix2d> qs(quotient_matrix(n, t), false);
            std::vector<double> roots{qs.eigenvalues()[0].real(), qs.eigenvalues()[1].real()};
            std::sort(roots.begin(), roots.end());
            CHECK_THAT(roots[0], WithinAbs(mu.mu_minus, 1e-10));
            CHECK_THAT(roots[1], WithinAbs(mu.mu_plus, 1e-10));
        }
    }
}

TEST_CASE("mu_m is the top eigenvalue of P_M", "[classical][oracle]") {
    for (int n = 2; n <= 30; n += 4) {
        for (int t = 1; t <= max_matching_size(n); t += 2) {
            const auto inst = build_signed_complete_graph(n, t, RandomPlacement{std::uint64_t(t)});
            const Eigen::MatrixXd PM = build_line_walk(inst.graph).restricted_transition_matrix();
            CHECK_THAT(perron_eigenvalue(PM), WithinAbs(mu_m_closed_form(n, t), 1e-9));
        }
    }
}

TEST_CASE("hitting time estimate", "[classical]") {
    const ClassicalWalkReport r = hitting_time_estimate(4, 1);
    CHECK_THAT(r.mu_m, WithinAbs(0.89538, 1e-5));
    CHECK_THAT(r.est_hitting, WithinAbs(9.5584, 1e-3));
    REQUIRE(r.exact_hitting.has_value());
    CHECK(*r.exact_hitting > 0.0);
    CHECK_FALSE(hitting_time_estimate(100, 1).exact_hitting.has_value());
    CHECK_FALSE(hitting_time_estimate(8, 1, ExactHitting::Never).exact_hitting.has_value());

    std::vector<double> ns, est;
    for (int n : {16, 32, 64, 128, 256, 512}) {
        ns.push_back(n);
        est.push_back(hitting_time_estimate(n, 1, ExactHitting::Never).est_hitting);
    }
    CHECK_THAT(oracle::loglog_slope(ns, est), WithinAbs(2.0, 0.1));
}

TEST_CASE("exact hitting time against the estimate", "[classical]") {
    for (int n = 4; n <= 60; n += 7) {
        for (int t : {1, (n + 3) / 4, max_matching_size(n)}) {
            const ClassicalWalkReport r = hitting_time_estimate(n, t);
            REQUIRE(r.exact_hitting.has_value());
            const double ratio = *r.exact_hitting / r.est_hitting;
            INFO("n=" << n << " t=" << t << " ratio=" << ratio);
            CHECK(ratio >= 0.1);
            CHECK(ratio <= 10.0);
        }
    }
}

TEST_CASE("direct and iterative solvers agree", "[classical]") {
    for (int n : {5, 20, 40}) {
        for (int t : {1, n / 3}) {
            const double direct = exact_hitting_time(n, t, HittingSolver::Direct);
            const double cg = exact_hitting_time(n, t, HittingSolver::Iterative);
            CHECK_THAT(cg, WithinRel(direct, 1e-8));
        }
    }
    // mean hitting time from the absorbing-chain oracle on K3 with one marked
    // edge: two surviving edges, each leaves to the marked one w.p. 1/2
    CHECK_THAT(exact_hitting_time(2, 1, HittingSolver::Direct), WithinAbs(2.0, 1e-12));
}

TEST_CASE("classical errors", "[classical][errors]") {
    auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        FAIL("no error raised");
        return ErrorCode::Io;
    };
    CHECK(code_of([] { mu_closed_form(4, 3); }) == ErrorCode::MatchingTooLarge);
    CHECK(code_of([] { mu_closed_form(4, 0); }) == ErrorCode::ZeroMatching);
    CHECK(code_of([] { hitting_time_estimate(4, 0); }) == ErrorCode::ZeroMatching);
    CHECK(code_of([] { build_line_walk(1, 0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { build_line_walk(61, 1).transition_matrix(); }) == ErrorCode::InvalidArgument);
}
