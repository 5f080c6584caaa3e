#pragma once

// Reproduction harness: (n, t = ceil(c n^alpha)) sweeps, log-log exponent
// fits, and the quantum-vs-classical comparison table.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "signsearch/classical.hpp"
#include "signsearch/graph.hpp"
#include "signsearch/search.hpp"
#include "signsearch/spectral.hpp"

namespace signsearch {

struct ModeSet {
    bool quantum = true;
    bool classical = true;
    bool spectra = true;

    bool empty() const { return !quantum && !classical && !spectra; }

    static ModeSet none() { return {false, false, false}; }

    /// Comma-separated subset of {quantum, classical, spectra}; "" or "none" is empty.
    static ModeSet parse(std::string_view text) {
        ModeSet out = none();
        std::string item;
        std::istringstream in{std::string(text)};
        while (std::getline(in, item, ',')) {
            item.erase(0, item.find_first_not_of(" \t"));
            item.erase(item.find_last_not_of(" \t") + 1);
            if (item.empty() || item == "none") continue;
            if (item == "quantum") out.quantum = true;
            else if (item == "classical") out.classical = true;
            else if (item == "spectra") out.spectra = true;
            else if (item == "all") out = ModeSet{};
            else throw Error(ErrorCode::InvalidArgument, "unknown mode '" + item + "'");
        }
        return out;
    }

    std::string str() const {
        std::string out;
        auto add = [&](bool on, const char* name) {
            if (!on) return;
            if (!out.empty()) out += ',';
            out += name;
        };
        add(quantum, "quantum");
        add(classical, "classical");
        add(spectra, "spectra");
        return out.empty() ? "none" : out;
    }
};

enum class PlacementKind { Canonical, Random };

inline std::vector<int> default_grid() { return {32, 45, 64, 91, 128, 181, 256, 362, 512}; }

struct SweepConfig {
    std::vector<int> n_grid = default_grid();
    double alpha = 0.0;
    double c = 1.0;
    ModeSet modes;
    std::uint64_t seed = 0;
    PlacementKind placement = PlacementKind::Canonical;
    int workers = 1;
    int exact_limit = kDenseLineGraphLimit;
};

/// t = ceil(c n^alpha).
inline int matching_size(int n, double alpha, double c) {
    const double raw = c * std::pow(static_cast<double>(n), alpha);
    return static_cast<int>(std::ceil(raw - 1e-9));
}

inline void validate(const SweepConfig& config) {
    if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
    }
    if (!(config.c > 0.0)) throw Error(ErrorCode::InvalidArgument, "c must be positive");
    if (config.workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be >= 1");
    for (int n : config.n_grid) {
        if (n < 2) throw Error(ErrorCode::InfeasibleGrid, "grid point n=" + std::to_string(n) + " < 2");
        const int t = matching_size(n, config.alpha, config.c);
        if (t < 1 || t > max_matching_size(n)) {
            throw Error(ErrorCode::InfeasibleGrid, "n=" + std::to_string(n) + " gives t=" + std::to_string(t) +
                                                       " outside [1, " + std::to_string(max_matching_size(n)) + "]");
        }
    }
}

struct SweepRow {
    int n = 0;
    double alpha = 0.0;
    double c = 0.0;
    int t = 0;
    std::optional<double> theta_m;
    std::optional<double> k_f;
    std::optional<double> fp_n;
    std::optional<double> k_total;
    std::optional<double> mu_m;
    std::optional<double> est_hitting;
    std::optional<double> exact_hitting;
};

struct Dataset {
    std::vector<std::string> comments;  // without the leading "# "
    std::vector<SweepRow> rows;
};

inline const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> columns = {"n",     "alpha",   "c",    "t",           "theta_m",
                                                     "k_f",   "FP_n",    "k_total", "mu_m",     "est_hitting",
                                                     "exact_hitting"};
    return columns;
}

inline std::optional<double> column_value(const SweepRow& row, std::string_view column) {
    if (column == "n") return row.n;
    if (column == "alpha") return row.alpha;
    if (column == "c") return row.c;
    if (column == "t") return row.t;
    if (column == "theta_m") return row.theta_m;
    if (column == "k_f") return row.k_f;
    if (column == "FP_n") return row.fp_n;
    if (column == "k_total") return row.k_total;
    if (column == "mu_m") return row.mu_m;
    if (column == "est_hitting") return row.est_hitting;
    if (column == "exact_hitting") return row.exact_hitting;
    throw Error(ErrorCode::InvalidArgument, "unknown column '" + std::string(column) + "'");
}

inline std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", value);
    return buf;
}

inline std::string format_optional(const std::optional<double>& value) {
    return value ? format_number(*value) : std::string("NA");
}

namespace detail {

inline SignedInstance sweep_instance(const SweepConfig& config, int n, int t) {
    if (config.placement == PlacementKind::Random) {
        return build_signed_complete_graph(n, t, RandomPlacement{config.seed ^ (0x9E3779B97F4A7C15ull * n)});
    }
    return build_signed_complete_graph(n, t);
}

inline SweepRow run_cell(const SweepConfig& config, int n) {
    SweepRow row;
    row.n = n;
    row.alpha = config.alpha;
    row.c = config.c;
    row.t = matching_size(n, config.alpha, config.c);
    if (config.modes.spectra || config.modes.quantum) {
        row.theta_m = t_spectrum_closed_form(n, row.t).theta_m;
    }
    if (config.modes.quantum) {
        const SignedInstance inst = sweep_instance(config, n, row.t);
        SearchOptions options;
        options.steps = 0;
        const SearchTrace trace = run_search(inst.graph, inst.sign, options);
        row.k_f = trace.k_f;
        row.fp_n = trace.fp_n;
        row.k_total = trace.k_total;
    }
    if (config.modes.classical) {
        const ClassicalWalkReport report = hitting_time_estimate(
            n, row.t, n <= config.exact_limit ? ExactHitting::UpToDenseLimit : ExactHitting::Never);
        row.mu_m = report.mu_m;
        row.est_hitting = report.est_hitting;
        row.exact_hitting = report.exact_hitting;
    }
    return row;
}

}  // namespace detail

inline Dataset run_sweep(const SweepConfig& config) {
    validate(config);
    Dataset data;
    std::ostringstream grid;
    for (std::size_t i = 0; i < config.n_grid.size(); ++i) grid << (i ? ";" : "") << config.n_grid[i];
    data.comments.push_back("sweep alpha=" + format_number(config.alpha) + " c=" + format_number(config.c) +
                            " modes=" + config.modes.str() + " seed=" + std::to_string(config.seed) +
                            " placement=" + (config.placement == PlacementKind::Random ? "random" : "canonical") +
                            " grid=" + grid.str());
    if (config.modes.empty()) return data;

    std::vector<int> grid_sorted = config.n_grid;
    std::sort(grid_sorted.begin(), grid_sorted.end());
    std::vector<SweepRow> rows(grid_sorted.size());
    std::vector<std::string> errors(grid_sorted.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid_sorted.size(); i = next++) {
            try {
                rows[i] = detail::run_cell(config, grid_sorted[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const auto count = static_cast<std::size_t>(std::min<int>(config.workers, static_cast<int>(grid_sorted.size())));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < count; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
        if (!e.empty()) throw Error(ErrorCode::InvalidArgument, "sweep cell failed: " + e);
    }
    for (const SweepRow& row : rows) {
        const SignedInstance inst = detail::sweep_instance(config, row.n, row.t);
        std::string line = provenance_header(inst.graph);
        line.erase(0, 2);  // "# "
        line.pop_back();   // '\n'
        data.comments.push_back(line);
    }
    data.rows = std::move(rows);
    return data;
}

inline void write_csv(std::ostream& out, const Dataset& data) {
    for (const auto& c : data.comments) out << "# " << c << '\n';
    const auto& columns = sweep_columns();
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const SweepRow& row : data.rows) {
        out << row.n << ',' << format_number(row.alpha) << ',' << format_number(row.c) << ',' << row.t << ','
            << format_optional(row.theta_m) << ',' << format_optional(row.k_f) << ','
            << format_optional(row.fp_n) << ',' << format_optional(row.k_total) << ','
            << format_optional(row.mu_m) << ',' << format_optional(row.est_hitting) << ','
            << format_optional(row.exact_hitting) << '\n';
    }
}

inline std::string to_csv(const Dataset& data) {
    std::ostringstream out;
    write_csv(out, data);
    return out.str();
}

inline Dataset read_csv(std::istream& in) {
    Dataset data;
    std::string line;
    bool header = false;
    auto parse = [](const std::string& field) -> std::optional<double> {
        if (field == "NA") return std::nullopt;
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw Error(ErrorCode::Io, "bad number '" + field + "'");
        return v;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            data.comments.push_back(line.size() > 2 ? line.substr(2) : std::string());
            continue;
        }
        std::vector<std::string> fields;
        std::string field;
        std::istringstream row(line);
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (!header) {
            if (fields != sweep_columns()) throw Error(ErrorCode::Io, "unexpected sweep header: " + line);
            header = true;
            continue;
        }
        if (fields.size() != sweep_columns().size()) throw Error(ErrorCode::Io, "malformed row: " + line);
        try {
            SweepRow r;
            r.n = static_cast<int>(*parse(fields[0]));
            r.alpha = *parse(fields[1]);
            r.c = *parse(fields[2]);
            r.t = static_cast<int>(*parse(fields[3]));
            r.theta_m = parse(fields[4]);
            r.k_f = parse(fields[5]);
            r.fp_n = parse(fields[6]);
            r.k_total = parse(fields[7]);
            r.mu_m = parse(fields[8]);
            r.est_hitting = parse(fields[9]);
            r.exact_hitting = parse(fields[10]);
            data.rows.push_back(r);
        } catch (const std::invalid_argument&) {
            throw Error(ErrorCode::Io, "malformed row: " + line);
        } catch (const std::bad_optional_access&) {
            throw Error(ErrorCode::Io, "required column is NA: " + line);
        }
    }
    if (!header) throw Error(ErrorCode::Io, "missing sweep header");
    return data;
}

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<double> residuals;
};

/// Least squares of log y on log x.
inline FitResult fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error(ErrorCode::DegenerateFit, "x and y differ in length");
    if (x.size() < 4) throw Error(ErrorCode::DegenerateFit, "need at least 4 points, got " + std::to_string(x.size()));
    const auto m = static_cast<double>(x.size());
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorCode::DegenerateFit, "non-positive value");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx <= 0.0) throw Error(ErrorCode::DegenerateFit, "all x values coincide");
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        fit.residuals.push_back(r);
        sse += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    return fit;
}

inline constexpr int kDefaultDropSmallest = 2;

/// Fits `column` against n after dropping the `drop_smallest` smallest n.
inline FitResult fit_exponent(const Dataset& data, std::string_view column,
                              int drop_smallest = kDefaultDropSmallest) {
    std::vector<SweepRow> rows = data.rows;
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.n < b.n; });
    std::vector<double> x, y;
    for (std::size_t i = static_cast<std::size_t>(std::max(drop_smallest, 0)); i < rows.size(); ++i) {
        const auto v = column_value(rows[i], column);
        if (!v) throw Error(ErrorCode::DegenerateFit, "column " + std::string(column) + " has NA entries");
        x.push_back(rows[i].n);
        y.push_back(*v);
    }
    return fit_exponent(x, y);
}

struct CompareReport {
    std::string table;
    /// Plot curves keyed by name: (n, value) points.
    std::map<std::string, std::vector<std::pair<double, double>>> curves;
    std::optional<FitResult> quantum_fit;
    std::optional<FitResult> classical_fit;
    std::optional<FitResult> speedup_fit;
};

inline CompareReport compare_report(const Dataset& data, int drop_smallest = kDefaultDropSmallest) {
    std::vector<SweepRow> rows = data.rows;
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.n < b.n; });
    for (const SweepRow& r : rows) {
        if (!r.k_total) throw Error(ErrorCode::MissingMode, "dataset lacks quantum results (k_total)");
        if (!r.est_hitting) throw Error(ErrorCode::MissingMode, "dataset lacks classical results (est_hitting)");
    }
    CompareReport report;
    std::ostringstream table;
    char line[256];
    std::snprintf(line, sizeof line, "%8s %8s %16s %16s %12s\n", "n", "t", "k_total", "est_hitting", "speedup");
    table << line;
    std::vector<double> ns, quantum, classical, speedup;
    for (const SweepRow& r : rows) {
        const double ratio = *r.est_hitting / *r.k_total;
        std::snprintf(line, sizeof line, "%8d %8d %16.6f %16.6f %12.6f\n", r.n, r.t, *r.k_total, *r.est_hitting, ratio);
        table << line;
        report.curves["k_total"].emplace_back(r.n, *r.k_total);
        report.curves["est_hitting"].emplace_back(r.n, *r.est_hitting);
        report.curves["speedup"].emplace_back(r.n, ratio);
        ns.push_back(r.n);
        quantum.push_back(*r.k_total);
        classical.push_back(*r.est_hitting);
        speedup.push_back(ratio);
    }
    const auto drop = static_cast<std::size_t>(std::max(drop_smallest, 0));
    if (rows.size() >= drop + 4) {
        auto tail = [&](const std::vector<double>& v) { return std::vector<double>(v.begin() + static_cast<long>(drop), v.end()); };
        report.quantum_fit = fit_exponent(tail(ns), tail(quantum));
        report.classical_fit = fit_exponent(tail(ns), tail(classical));
        report.speedup_fit = fit_exponent(tail(ns), tail(speedup));
        std::snprintf(line, sizeof line, "slopes (log-log, smallest %zu n dropped): k_total %.4f  est_hitting %.4f  speedup %.4f\n",
                      drop, report.quantum_fit->slope, report.classical_fit->slope, report.speedup_fit->slope);
        table << line;
    } else {
        table << "too few rows for a slope fit\n";
    }
    report.table = table.str();
    return report;
}

/// Writes one "<prefix>_<curve>.dat" file per curve, "x y" per line.
inline std::vector<std::string> write_plot_data(const CompareReport& report, const std::string& prefix) {
    std::vector<std::string> written;
    for (const auto& [name, points] : report.curves) {
        const std::string path = prefix + "_" + name + ".dat";
        std::ofstream out(path);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
        out << "# n " << name << '\n';
        for (const auto& [x, y] : points) out << format_number(x) << ' ' << format_number(y) << '\n';
        written.push_back(path);
    }
    return written;
}

/// Plain "key = value" lines; '#' starts a comment.
inline std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int number = 0;
    auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t\r"));
        s.erase(s.find_last_not_of(" \t\r") + 1);
        return s;
    };
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(number) + " has no '='");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        if (key.empty()) throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(number) + " has no key");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

}  // namespace signsearch
