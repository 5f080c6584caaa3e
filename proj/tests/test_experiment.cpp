#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "signsearch/experiment.hpp"

using namespace signsearch;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SweepConfig small_config() {
    SweepConfig cfg;
    cfg.n_grid = {24, 8, 12, 16, 32, 45};
    cfg.alpha = 0.5;
    cfg.c = 1.0;
    return cfg;
}

}  // namespace

TEST_CASE("matching size rule", "[experiment]") {
    CHECK(matching_size(64, 0.0, 1.0) == 1);
    CHECK(matching_size(64, 0.5, 1.0) == 8);
    CHECK(matching_size(45, 0.5, 1.0) == 7);
    CHECK(matching_size(64, 1.0, 0.25) == 16);
    CHECK(matching_size(45, 1.0, 0.25) == 12);
}

TEST_CASE("mode parsing", "[experiment]") {
    CHECK(ModeSet::parse("quantum").str() == "quantum");
    CHECK(ModeSet::parse("classical, spectra").str() == "classical,spectra");
    CHECK(ModeSet::parse("all").str() == "quantum,classical,spectra");
    CHECK(ModeSet::parse("").empty());
    CHECK(ModeSet::parse("none").empty());
    CHECK_THROWS_AS(ModeSet::parse("bogus"), Error);
}

TEST_CASE("sweep validation", "[experiment][errors]") {
    SweepConfig cfg;
    cfg.alpha = 1.0;
    cfg.c = 1.0;
    try {
        run_sweep(cfg);
        FAIL("expected InfeasibleGrid");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InfeasibleGrid);
    }
    cfg.c = 0.25;
    cfg.n_grid = {1};
    CHECK_THROWS_AS(run_sweep(cfg), Error);
    cfg.n_grid = {32};
    cfg.alpha = 1.5;
    CHECK_THROWS_AS(run_sweep(cfg), Error);
}

TEST_CASE("empty mode set yields a header-only dataset", "[experiment]") {
    SweepConfig cfg = small_config();
    cfg.modes = ModeSet::none();
    const Dataset data = run_sweep(cfg);
    CHECK(data.rows.empty());
    const std::string csv = to_csv(data);
    std::istringstream in(csv);
    std::string line;
    int data_lines = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') ++data_lines;
    }
    CHECK(data_lines == 1);
    std::istringstream back(csv);
    CHECK(read_csv(back).rows.empty());
}

TEST_CASE("sweep rows are consistent", "[experiment]") {
    const Dataset data = run_sweep(small_config());
    REQUIRE(data.rows.size() == 6);
    for (std::size_t i = 1; i < data.rows.size(); ++i) CHECK(data.rows[i - 1].n < data.rows[i].n);
    for (const SweepRow& r : data.rows) {
        INFO("n=" << r.n);
        CHECK(r.t == static_cast<int>(std::ceil(std::sqrt(double(r.n)))));
        REQUIRE(r.k_total);
        CHECK_THAT(*r.k_total, WithinRel(*r.k_f / std::sqrt(*r.fp_n), 1e-12));
        CHECK_THAT(*r.theta_m, WithinAbs(t_spectrum_closed_form(r.n, r.t).theta_m, 1e-15));
        CHECK_THAT(*r.mu_m, WithinAbs(mu_m_closed_form(r.n, r.t), 1e-15));
        REQUIRE(r.exact_hitting);
        CHECK(*r.exact_hitting / *r.est_hitting > 0.1);
        CHECK(*r.exact_hitting / *r.est_hitting < 10.0);
    }
    CHECK(data.comments.size() == 7);
    CHECK(data.comments[1] == "graph n=8 t=3 matching=0-1;2-3;4-5");
}

TEST_CASE("sweep output is deterministic", "[experiment][property]") {
    SweepConfig cfg = small_config();
    cfg.placement = PlacementKind::Random;
    cfg.seed = 1234;
    const std::string a = to_csv(run_sweep(cfg));
    const std::string b = to_csv(run_sweep(cfg));
    cfg.workers = 3;
    const std::string c = to_csv(run_sweep(cfg));
    CHECK(a == b);
    CHECK(a == c);
    cfg.seed = 99;
    const std::string d = to_csv(run_sweep(cfg));
    CHECK(a != d);
}

TEST_CASE("csv round trip", "[experiment]") {
    const Dataset data = run_sweep(small_config());
    std::istringstream in(to_csv(data));
    const Dataset back = read_csv(in);
    REQUIRE(back.rows.size() == data.rows.size());
    CHECK(back.comments == data.comments);
    CHECK(to_csv(back) == to_csv(data));

    std::istringstream bad("n,alpha\n1,2\n");
    CHECK_THROWS_AS(read_csv(bad), Error);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_csv(empty), Error);
}

TEST_CASE("exponent fit", "[experiment]") {
    std::vector<double> x{10, 20, 40, 80, 160};
    std::vector<double> sq, root;
    for (double v : x) {
        sq.push_back(v * v);
        root.push_back(7.0 * std::sqrt(v));
    }
    const FitResult a = fit_exponent(x, sq);
    CHECK_THAT(a.slope, WithinAbs(2.0, 1e-12));
    CHECK_THAT(a.r_squared, WithinAbs(1.0, 1e-12));
    const FitResult b = fit_exponent(x, root);
    CHECK_THAT(b.slope, WithinAbs(0.5, 1e-12));
    CHECK_THAT(b.intercept, WithinAbs(std::log(7.0), 1e-12));
    for (double r : b.residuals) CHECK(std::abs(r) < 1e-12);

    std::vector<double> noisy{3.0, 5.5, 12.0, 21.0, 47.0};
    CHECK_THAT(fit_exponent(x, noisy).slope, WithinAbs(oracle::loglog_slope(x, noisy), 1e-12));

    auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    CHECK(code_of([] { fit_exponent({1, 2, 3}, {1, 2, 3}); }) == ErrorCode::DegenerateFit);
    CHECK(code_of([] { fit_exponent({1, 2, 3, 4}, {1, 0, 3, 4}); }) == ErrorCode::DegenerateFit);
    CHECK(code_of([] { fit_exponent({2, 2, 2, 2}, {1, 2, 3, 4}); }) == ErrorCode::DegenerateFit);
}

TEST_CASE("classical estimate slope on the default grid", "[experiment]") {
    SweepConfig cfg;
    cfg.modes = ModeSet::parse("classical");
    cfg.exact_limit = 0;
    const Dataset data = run_sweep(cfg);
    CHECK_FALSE(data.rows.front().k_total.has_value());
    CHECK_FALSE(data.rows.front().exact_hitting.has_value());
    CHECK_THAT(fit_exponent(data, "est_hitting").slope, WithinAbs(2.0, 0.1));
    CHECK_THROWS_AS(fit_exponent(data, "k_total"), Error);
    CHECK_THROWS_AS(fit_exponent(data, "nonsense"), Error);
}

TEST_CASE("compare report", "[experiment]") {
    SweepConfig cfg = small_config();
    cfg.modes = ModeSet::parse("quantum,classical");
    const Dataset data = run_sweep(cfg);
    const CompareReport report = compare_report(data);
    REQUIRE(report.quantum_fit);
    CHECK(report.table.find("speedup") != std::string::npos);
    CHECK(report.curves.at("k_total").size() == 6);
    CHECK_THAT(report.speedup_fit->slope, WithinAbs(report.classical_fit->slope - report.quantum_fit->slope, 1e-10));

    Dataset one = data;
    one.rows.resize(1);
    const CompareReport single = compare_report(one);
    CHECK_FALSE(single.quantum_fit);
    CHECK(single.table.find("too few rows") != std::string::npos);

    SweepConfig qonly = small_config();
    qonly.modes = ModeSet::parse("quantum");
    try {
        compare_report(run_sweep(qonly));
        FAIL("expected MissingMode");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingMode);
    }

    const auto dir = std::filesystem::temp_directory_path() / "signsearch_plot_test";
    std::filesystem::create_directories(dir);
    const auto files = write_plot_data(report, (dir / "cmp").string());
    CHECK(files.size() == 3);
    std::ifstream in(dir / "cmp_speedup.dat");
    std::string header;
    std::getline(in, header);
    CHECK(header == "# n speedup");
    std::filesystem::remove_all(dir);
}

TEST_CASE("key value config", "[experiment]") {
    std::istringstream in("# sweep settings\nalpha = 0.5\n--c=2  # trailing\n\nmodes = quantum,classical\n");
    const auto kv = read_key_values(in);
    REQUIRE(kv.size() == 3);
    CHECK(kv[0] == std::pair<std::string, std::string>{"alpha", "0.5"});
    CHECK(kv[1] == std::pair<std::string, std::string>{"c", "2"});
    CHECK(kv[2].second == "quantum,classical");
    std::istringstream bad("alpha 0.5\n");
    CHECK_THROWS_AS(read_key_values(bad), Error);
}
