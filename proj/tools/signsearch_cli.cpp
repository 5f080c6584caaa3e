// signsearch_cli: spectra, single searches, classical baselines, sweeps and fits.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "signsearch/signsearch.hpp"

using namespace signsearch;

namespace {

struct Common {
    int n = 32;
    std::optional<int> t;
    double alpha = 0.0;
    double c = 1.0;
    std::uint64_t seed = 0;
    std::string placement = "canonical";
    std::string out = "-";
};

struct Options {
    Common common;
    std::vector<int> n_list;
    std::optional<int> steps;
    std::string start = "beta";
    std::string dump;
    std::string exact = "auto";
    std::string modes = "quantum,classical,spectra";
    int workers = 1;
    int exact_limit = kDenseLineGraphLimit;
    std::string in;
    std::string column = "k_total";
    int drop = kDefaultDropSmallest;
    std::string plot_prefix;
};

// Output goes to stdout unless --out names a file.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw Error(ErrorCode::Io, "cannot write " + path);
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

int resolve_t(const Common& c, int n) { return c.t ? *c.t : matching_size(n, c.alpha, c.c); }

SignedInstance make_instance(const Common& c, int n, int t) {
    if (c.placement == "random") return build_signed_complete_graph(n, t, RandomPlacement{c.seed});
    return build_signed_complete_graph(n, t);
}

void run_spectrum(const Options& o) {
    const int n = o.common.n;
    const int t = resolve_t(o.common, n);
    const SignedInstance inst = make_instance(o.common, n, t);
    const SpectralSummary s = t_spectrum_closed_form(n, t);
    const Spectrum numeric = numeric_t_spectrum(build_T(inst.graph, inst.sign));
    Sink sink(o.common.out);
    auto& out = sink.stream();
    out << provenance_header(inst.graph);
    out << "# scalars s=" << format_number(s.s) << " delta=" << format_number(s.delta)
        << " b_t=" << format_number(s.b_t) << " rho=" << format_number(s.rho) << " c_n=" << format_number(s.c_n)
        << " lambda_m=" << format_number(s.lambda_m) << " theta_m=" << format_number(s.theta_m) << '\n';
    out << "source,eigenvalue,multiplicity\n";
    for (const auto& e : s.eigenvalues) out << "closed_form," << format_number(e.value) << ',' << e.multiplicity << '\n';
    for (const auto& e : numeric) out << "numeric," << format_number(e.value) << ',' << e.multiplicity << '\n';
}

void run_search_cmd(const Options& o) {
    const int n = o.common.n;
    const int t = resolve_t(o.common, n);
    const SignedInstance inst = make_instance(o.common, n, t);
    SearchOptions opts;
    opts.steps = o.steps;
    if (o.start == "uniform") opts.start = SearchStart::Uniform;
    ArcState peak;
    const int k_f = peak_step(t_spectrum_closed_form(n, t).theta_m);
    if (!o.dump.empty()) {
        opts.observer = [&](int k, const ArcState& psi) {
            if (k == k_f) peak = psi;
        };
        if (opts.steps.value_or(2 * k_f) < k_f) opts.steps = k_f;
    }
    const SearchTrace trace = run_search(inst.graph, inst.sign, opts);

    Sink sink(o.common.out);
    auto& out = sink.stream();
    out << provenance_header(inst.graph);
    out << "# summary theta_m=" << format_number(trace.theta_m) << " k_f=" << trace.k_f
        << " FP_n=" << format_number(trace.fp_n) << " k_total=" << format_number(trace.k_total)
        << " overlap=" << format_number(trace.overlap) << " start=" << o.start << '\n';
    out << "n,t,k,FP_k\n";
    for (const SearchPoint& p : trace.probs) out << n << ',' << t << ',' << p.step << ',' << format_number(p.probability) << '\n';

    if (!o.dump.empty()) {
        const bool binary = o.dump.size() > 4 && o.dump.compare(o.dump.size() - 4, 4, ".bin") == 0;
        std::ofstream file(o.dump, std::ios::binary);
        if (!file) throw Error(ErrorCode::Io, "cannot write " + o.dump);
        if (binary) write_state_binary(file, inst.graph, peak);
        else write_state_csv(file, inst.graph, peak);
    }
}

void run_classical(const Options& o) {
    std::vector<int> grid = o.n_list.empty() ? std::vector<int>{o.common.n} : o.n_list;
    ExactHitting exact = ExactHitting::UpToDenseLimit;
    if (o.exact == "always") exact = ExactHitting::Always;
    else if (o.exact == "never") exact = ExactHitting::Never;
    Sink sink(o.common.out);
    auto& out = sink.stream();
    out << "# classical exact=" << o.exact << '\n';
    out << "n,t,mu_plus,mu_m,est_hitting,exact_hitting\n";
    for (int n : grid) {
        const ClassicalWalkReport r = hitting_time_estimate(n, resolve_t(o.common, n), exact);
        out << r.n << ',' << r.t << ',' << format_number(r.mu_plus) << ',' << format_number(r.mu_m) << ','
            << format_number(r.est_hitting) << ',' << format_optional(r.exact_hitting) << '\n';
    }
}

void run_sweep_cmd(const Options& o) {
    SweepConfig cfg;
    if (!o.n_list.empty()) cfg.n_grid = o.n_list;
    cfg.alpha = o.common.alpha;
    cfg.c = o.common.c;
    cfg.modes = ModeSet::parse(o.modes);
    cfg.seed = o.common.seed;
    cfg.placement = o.common.placement == "random" ? PlacementKind::Random : PlacementKind::Canonical;
    cfg.workers = o.workers;
    cfg.exact_limit = o.exact_limit;
    const Dataset data = run_sweep(cfg);
    Sink sink(o.common.out);
    write_csv(sink.stream(), data);
}

Dataset load(const std::string& path) {
    if (path.empty() || path == "-") return read_csv(std::cin);
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
    return read_csv(in);
}

void run_fit(const Options& o) {
    const Dataset data = load(o.in);
    const FitResult fit = fit_exponent(data, o.column, o.drop);
    Sink sink(o.common.out);
    auto& out = sink.stream();
    out << "# fit drop=" << o.drop << " points=" << fit.residuals.size() << '\n';
    out << "column,slope,intercept,r_squared\n";
    out << o.column << ',' << format_number(fit.slope) << ',' << format_number(fit.intercept) << ','
        << format_number(fit.r_squared) << '\n';
}

void run_report(const Options& o) {
    const Dataset data = load(o.in);
    const CompareReport report = compare_report(data, o.drop);
    Sink sink(o.common.out);
    sink.stream() << report.table;
    if (!o.plot_prefix.empty()) {
        for (const auto& path : write_plot_data(report, o.plot_prefix)) std::cerr << "wrote " << path << '\n';
    }
}

// Config values fill only the options the command line left unset.
void apply_config(CLI::App* sub, const std::string& path, const std::set<std::string>& known) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot read config " + path);
    for (const auto& [key, value] : read_key_values(in)) {
        if (!known.count(key)) throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (!opt || opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Search for a marked matching on signed complete graphs"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Options o;
    std::string config;

    auto common = [&](CLI::App* sub, bool list_n) {
        if (list_n) {
            sub->add_option("--n", o.n_list, "grid of n values, comma separated")
                ->delimiter(',')
                ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
        } else {
            sub->add_option("--n", o.common.n, "graph has n+1 vertices")->capture_default_str();
        }
        sub->add_option("--t", o.common.t, "matching size (default ceil(c n^alpha))");
        sub->add_option("--alpha", o.common.alpha, "t = ceil(c n^alpha)")->capture_default_str();
        sub->add_option("--c", o.common.c, "t = ceil(c n^alpha)")->capture_default_str();
        sub->add_option("--seed", o.common.seed, "seed for random placement")->capture_default_str();
        sub->add_option("--placement", o.common.placement)->check(CLI::IsMember({"canonical", "random"}))->capture_default_str();
        sub->add_option("--out", o.common.out, "output file, - for stdout")->capture_default_str();
        sub->add_option("--config", config, "key = value file; command-line flags win");
    };

    auto* spectrum = app.add_subcommand("spectrum", "closed-form and numeric spectrum of T");
    common(spectrum, false);

    auto* search = app.add_subcommand("search", "simulate the search walk");
    common(search, false);
    search->add_option("--steps", o.steps, "steps to record (default 2 k_f)");
    search->add_option("--start", o.start)->check(CLI::IsMember({"beta", "uniform"}))->capture_default_str();
    search->add_option("--dump", o.dump, "write the state at k_f (.bin for binary, CSV otherwise)");

    auto* classical = app.add_subcommand("classical", "line-graph walk hitting times");
    common(classical, true);
    classical->add_option("--exact", o.exact)->check(CLI::IsMember({"auto", "always", "never"}))->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "run the (n, t) grid");
    common(sweep, true);
    sweep->add_option("--modes", o.modes, "quantum,classical,spectra or none")->capture_default_str();
    sweep->add_option("--workers", o.workers)->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_option("--exact-limit", o.exact_limit, "largest n with an exact hitting time")->capture_default_str();

    auto* fit = app.add_subcommand("fit", "log-log exponent of one sweep column");
    fit->add_option("--in", o.in, "sweep CSV, - for stdin")->required();
    fit->add_option("--column", o.column)->capture_default_str();
    fit->add_option("--drop", o.drop, "smallest n values to skip")->capture_default_str();
    fit->add_option("--out", o.common.out)->capture_default_str();
    fit->add_option("--config", config);

    auto* report = app.add_subcommand("report", "quantum vs classical table");
    report->add_option("--in", o.in, "sweep CSV, - for stdin")->required();
    report->add_option("--drop", o.drop)->capture_default_str();
    report->add_option("--plot-prefix", o.plot_prefix, "write <prefix>_<curve>.dat files");
    report->add_option("--out", o.common.out)->capture_default_str();
    report->add_option("--config", config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (!config.empty()) {
            std::set<std::string> known;
            for (CLI::App* s : {spectrum, search, classical, sweep, fit, report}) {
                for (const CLI::Option* opt : s->get_options()) {
                    for (const auto& name : opt->get_lnames()) known.insert(name);
                }
            }
            apply_config(sub, config, known);
        }
        if (sub == spectrum) run_spectrum(o);
        else if (sub == search) run_search_cmd(o);
        else if (sub == classical) run_classical(o);
        else if (sub == sweep) run_sweep_cmd(o);
        else if (sub == fit) run_fit(o);
        else run_report(o);
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
