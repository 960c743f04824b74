#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracdisc/errors.hpp"
#include "fracdisc/exact.hpp"
#include "fracdisc/gl.hpp"
#include "fracdisc/matrix.hpp"
#include "fracdisc/problem.hpp"

namespace fracdisc {

enum class Method { gl, exact_series, exact_quadrature };

inline std::string method_name(Method m) {
    switch (m) {
        case Method::gl: return "gl";
        case Method::exact_series: return "exact-series";
        case Method::exact_quadrature: return "exact-quad";
    }
    return "?";
}

inline Method method_from_name(const std::string& name) {
    if (name == "gl") return Method::gl;
    if (name == "exact-series") return Method::exact_series;
    if (name == "exact-quad") return Method::exact_quadrature;
    throw ValidationError("unknown method '" + name + "' (expected gl|exact-series|exact-quad)");
}

inline std::string method_tag(Method m) { return m == Method::gl ? "gl" : "exact"; }

// Real row-major matrix payload used in serializable reports.
using RealRows = std::vector<std::vector<double>>;

namespace detail {

inline RealRows to_rows(const Matrix& m) {
    if (!m.is_effectively_real())
        throw ValidationError("report: matrix has a non-negligible imaginary part");
    RealRows rows(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j).real();
    return rows;
}

inline double rows_frobenius(const RealRows& a) {
    double s = 0.0;
    for (const auto& row : a)
        for (double v : row) s += v * v;
    return std::sqrt(s);
}

inline RealRows rows_difference(const RealRows& a, const RealRows& b) {
    RealRows d = a;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d[i].size(); ++j) d[i][j] -= b[i][j];
    return d;
}

} // namespace detail

// Per-interval and per-node comparison of two discretization methods on one
// problem. Plain data; serializes to JSON losslessly.
struct ComparisonReport {
    // metadata
    int p = 0;
    int q = 0;
    double alpha = 0.0;
    std::vector<double> grid;
    int max_terms = 0;
    double tail_tol = 0.0;
    int quad_nodes = 0;
    std::string method_a;
    std::string method_b;

    // per-interval transitions and differences (a - b); entries only for
    // intervals where the computation succeeded
    std::vector<RealRows> transitions_a;
    std::vector<RealRows> transitions_b;
    std::vector<RealRows> transition_difference;
    std::vector<double> transition_diff_frobenius;
    std::vector<std::string> interval_status;   // "ok" or an error annotation

    // node trajectories (from x0 through the per-interval transitions)
    Trajectory trajectory_a;
    Trajectory trajectory_b;
    std::vector<double> trajectory_diff_euclidean;   // per node
    double trajectory_diff_max = 0.0;
    double trajectory_diff_sum = 0.0;

    // diagnostics
    double series_vs_quadrature_max_abs = 0.0;
    double stepwise_vs_oneshot_frobenius = 0.0;

    bool operator==(const ComparisonReport&) const = default;
};

namespace detail {

struct MethodRun {
    std::vector<RealRows> transitions;
    std::vector<std::string> status;        // per interval
    std::vector<std::vector<double>> states; // node states while transitions succeed
    double series_vs_quadrature_max_abs = 0.0;
    double stepwise_vs_oneshot_frobenius = std::numeric_limits<double>::quiet_NaN();
};

inline MethodRun run_method(const ProblemSpec& problem, Method method,
                            const SeriesControl& ctrl) {
    MethodRun run;
    const std::size_t k = problem.intervals();
    run.states.push_back(problem.x0);

    std::vector<Matrix> phis(k);
    if (method == Method::gl) {
        const double alpha = problem.order.alpha();
        const double delta = problem.uniform_step();
        if (problem.forcing)
            throw ValidationError("compare: forcing is not supported by the GL path");
        const TransitionSequence seq =
            gl_transition_sequence(problem.A, alpha, delta, k);
        for (std::size_t i = 0; i < k; ++i) {
            try {
                phis[i] = gl_pair_transition(seq, i + 1, i);
                run.status.push_back("ok");
            } catch (const Error& e) {
                run.status.push_back(e.what());
            }
        }
    } else {
        const ExactMethod em =
            method == Method::exact_series ? ExactMethod::series : ExactMethod::quadrature;
        for (std::size_t i = 0; i < k; ++i) {
            try {
                phis[i] = exact_fundamental(problem.A, problem.order, problem.grid[i],
                                            problem.grid[i + 1], ctrl, em);
                run.status.push_back("ok");
                // cross-validation of the two evaluation paths
                const ExactMethod other =
                    em == ExactMethod::series ? ExactMethod::quadrature : ExactMethod::series;
                const Matrix check = exact_fundamental(problem.A, problem.order, problem.grid[i],
                                                       problem.grid[i + 1], ctrl, other);
                run.series_vs_quadrature_max_abs =
                    std::max(run.series_vs_quadrature_max_abs, (phis[i] - check).max_abs());
            } catch (const Error& e) {
                run.status.push_back(e.what());
            }
        }
    }

    // trajectory through the per-interval transitions, stopping at the first
    // failed interval
    CVector state = to_complex_state(problem.x0);
    Matrix product = Matrix::identity(problem.dimension());
    bool intact = true;
    for (std::size_t i = 0; i < k; ++i) {
        if (run.status[i] != "ok") {
            intact = false;
            break;
        }
        state = phis[i] * state;
        if (problem.forcing) {
            state = state + forced_increment(problem.A, problem.order, problem.grid[i],
                                             problem.grid[i + 1], problem.forcing->values[i],
                                             ctrl);
        }
        product = phis[i] * product;
        run.states.push_back(to_real_state(state));
        run.transitions.push_back(to_rows(phis[i]));
    }
    for (std::size_t i = run.transitions.size(); i < k; ++i) run.transitions.emplace_back();

    if (method != Method::gl && intact && k > 0) {
        try {
            const ExactMethod em =
                method == Method::exact_series ? ExactMethod::series : ExactMethod::quadrature;
            const Matrix one_shot = exact_fundamental(problem.A, problem.order,
                                                      problem.grid.front(), problem.grid.back(),
                                                      ctrl, em);
            run.stepwise_vs_oneshot_frobenius = (one_shot - product).frobenius_norm();
        } catch (const Error&) {
            // leave NaN: one-shot evaluation failed, stepwise result stands
        }
    }
    return run;
}

} // namespace detail

// Compare two methods interval by interval. Defaults mirror the approximate
// vs exact comparison; any pairing is allowed (self-comparison included).
inline ComparisonReport compare_methods(const ProblemSpec& problem, const SeriesControl& ctrl = {},
                                        Method a = Method::gl, Method b = Method::exact_series) {
    problem.validate();
    ctrl.validate();

    ComparisonReport rep;
    rep.p = problem.order.p;
    rep.q = problem.order.q;
    rep.alpha = problem.order.alpha();
    rep.grid = problem.grid;
    rep.max_terms = ctrl.max_terms;
    rep.tail_tol = ctrl.tail_tol;
    rep.quad_nodes = ctrl.quad_nodes;
    rep.method_a = method_name(a);
    rep.method_b = method_name(b);

    const detail::MethodRun ra = detail::run_method(problem, a, ctrl);
    const detail::MethodRun rb = detail::run_method(problem, b, ctrl);

    rep.transitions_a = ra.transitions;
    rep.transitions_b = rb.transitions;
    rep.series_vs_quadrature_max_abs =
        std::max(ra.series_vs_quadrature_max_abs, rb.series_vs_quadrature_max_abs);
    const double pa = ra.stepwise_vs_oneshot_frobenius;
    const double pb = rb.stepwise_vs_oneshot_frobenius;
    rep.stepwise_vs_oneshot_frobenius = std::isnan(pa) ? pb : (std::isnan(pb) ? pa : std::max(pa, pb));
    if (std::isnan(rep.stepwise_vs_oneshot_frobenius)) rep.stepwise_vs_oneshot_frobenius = 0.0;

    const std::size_t k = problem.intervals();
    for (std::size_t i = 0; i < k; ++i) {
        const bool ok_a = ra.status[i] == "ok";
        const bool ok_b = rb.status[i] == "ok";
        if (ok_a && ok_b) {
            rep.interval_status.push_back("ok");
            rep.transition_difference.push_back(
                detail::rows_difference(ra.transitions[i], rb.transitions[i]));
            rep.transition_diff_frobenius.push_back(
                detail::rows_frobenius(rep.transition_difference.back()));
        } else {
            std::string msg;
            if (!ok_a) msg += rep.method_a + ": " + ra.status[i];
            if (!ok_b) msg += (msg.empty() ? "" : "; ") + rep.method_b + ": " + rb.status[i];
            rep.interval_status.push_back(msg);
            rep.transition_difference.emplace_back();
            rep.transition_diff_frobenius.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }

    rep.trajectory_a.times = problem.grid;
    rep.trajectory_a.times.resize(ra.states.size());
    rep.trajectory_a.states = ra.states;
    rep.trajectory_b.times = problem.grid;
    rep.trajectory_b.times.resize(rb.states.size());
    rep.trajectory_b.states = rb.states;

    const std::size_t nodes = std::min(ra.states.size(), rb.states.size());
    for (std::size_t i = 0; i < nodes; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < ra.states[i].size(); ++j) {
            const double d = ra.states[i][j] - rb.states[i][j];
            s += d * d;
        }
        rep.trajectory_diff_euclidean.push_back(std::sqrt(s));
    }
    for (double v : rep.trajectory_diff_euclidean) {
        rep.trajectory_diff_max = std::max(rep.trajectory_diff_max, v);
        rep.trajectory_diff_sum += v;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const Trajectory& t) {
    j = nlohmann::json{{"times", t.times}, {"states", t.states}};
}

inline void from_json(const nlohmann::json& j, Trajectory& t) {
    j.at("times").get_to(t.times);
    j.at("states").get_to(t.states);
}

inline void to_json(nlohmann::json& j, const ComparisonReport& r) {
    j = nlohmann::json{{"p", r.p},
                       {"q", r.q},
                       {"alpha", r.alpha},
                       {"grid", r.grid},
                       {"max_terms", r.max_terms},
                       {"tail_tol", r.tail_tol},
                       {"quad_nodes", r.quad_nodes},
                       {"method_a", r.method_a},
                       {"method_b", r.method_b},
                       {"transitions_a", r.transitions_a},
                       {"transitions_b", r.transitions_b},
                       {"transition_difference", r.transition_difference},
                       {"transition_diff_frobenius", r.transition_diff_frobenius},
                       {"interval_status", r.interval_status},
                       {"trajectory_a", r.trajectory_a},
                       {"trajectory_b", r.trajectory_b},
                       {"trajectory_diff_euclidean", r.trajectory_diff_euclidean},
                       {"trajectory_diff_max", r.trajectory_diff_max},
                       {"trajectory_diff_sum", r.trajectory_diff_sum},
                       {"series_vs_quadrature_max_abs", r.series_vs_quadrature_max_abs},
                       {"stepwise_vs_oneshot_frobenius", r.stepwise_vs_oneshot_frobenius}};
}

inline void from_json(const nlohmann::json& j, ComparisonReport& r) {
    j.at("p").get_to(r.p);
    j.at("q").get_to(r.q);
    j.at("alpha").get_to(r.alpha);
    j.at("grid").get_to(r.grid);
    j.at("max_terms").get_to(r.max_terms);
    j.at("tail_tol").get_to(r.tail_tol);
    j.at("quad_nodes").get_to(r.quad_nodes);
    j.at("method_a").get_to(r.method_a);
    j.at("method_b").get_to(r.method_b);
    j.at("transitions_a").get_to(r.transitions_a);
    j.at("transitions_b").get_to(r.transitions_b);
    j.at("transition_difference").get_to(r.transition_difference);
    j.at("transition_diff_frobenius").get_to(r.transition_diff_frobenius);
    j.at("interval_status").get_to(r.interval_status);
    j.at("trajectory_a").get_to(r.trajectory_a);
    j.at("trajectory_b").get_to(r.trajectory_b);
    j.at("trajectory_diff_euclidean").get_to(r.trajectory_diff_euclidean);
    j.at("trajectory_diff_max").get_to(r.trajectory_diff_max);
    j.at("trajectory_diff_sum").get_to(r.trajectory_diff_sum);
    j.at("series_vs_quadrature_max_abs").get_to(r.series_vs_quadrature_max_abs);
    j.at("stepwise_vs_oneshot_frobenius").get_to(r.stepwise_vs_oneshot_frobenius);
}

// ---------------------------------------------------------------------------
// CSV / JSON emission
// ---------------------------------------------------------------------------

enum class EmitFormat { csv, json };

inline EmitFormat emit_format_from_name(const std::string& name) {
    if (name == "csv") return EmitFormat::csv;
    if (name == "json") return EmitFormat::json;
    throw ValidationError("unknown format '" + name + "' (expected csv|json)");
}

namespace detail {

// 15 significant digits, '.' decimal point regardless of locale.
inline std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 15);
    return std::string(buf.data(), res.ptr);
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path) : out_(path) {
        if (!out_) throw IOError("cannot open output file: " + path.string());
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << csv_quote(cells[i]);
        }
        out_ << '\n';
        if (!out_) throw IOError("write failure");
    }

private:
    std::ofstream out_;
};

inline std::size_t report_dimension(const ComparisonReport& r) {
    if (!r.trajectory_a.states.empty()) return r.trajectory_a.states.front().size();
    if (!r.trajectory_b.states.empty()) return r.trajectory_b.states.front().size();
    for (const auto& t : r.transitions_a)
        if (!t.empty()) return t.size();
    return 0;
}

inline void emit_transitions_csv(const std::filesystem::path& path, const ComparisonReport& r,
                                 const std::vector<RealRows>& transitions) {
    CsvWriter w(path);
    const std::size_t n = report_dimension(r);
    std::vector<std::string> header = {"t_lo", "t_hi"};
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j)
            header.push_back("phi_" + std::to_string(i) + std::to_string(j));
    w.row(header);
    for (std::size_t k = 0; k < transitions.size(); ++k) {
        if (transitions[k].empty()) continue;   // failed interval, annotated in norms.csv
        std::vector<std::string> cells = {format_number(r.grid[k]), format_number(r.grid[k + 1])};
        for (const auto& row : transitions[k])
            for (double v : row) cells.push_back(format_number(v));
        w.row(cells);
    }
}

} // namespace detail

// Write the comparison artifact set. CSV: trajectories.csv, transitions_*.csv
// and norms.csv; JSON: a single report.json mirroring ComparisonReport.
inline void emit(const ComparisonReport& report, EmitFormat format,
                 const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IOError("cannot create output directory: " + dir.string());

    if (format == EmitFormat::json) {
        std::ofstream out(dir / "report.json");
        if (!out) throw IOError("cannot open output file: " + (dir / "report.json").string());
        out << nlohmann::json(report).dump(2) << '\n';
        if (!out) throw IOError("write failure");
        return;
    }

    const std::size_t n = detail::report_dimension(report);

    std::string tag_a = report.method_a == "gl" ? "gl" : "exact";
    std::string tag_b = report.method_b == "gl" ? "gl" : "exact";
    if (tag_a == tag_b) {
        tag_a += "_a";
        tag_b += "_b";
    }

    {
        detail::CsvWriter w(dir / "trajectories.csv");
        std::vector<std::string> header = {"t"};
        for (std::size_t i = 1; i <= n; ++i) header.push_back(tag_a + "_" + std::to_string(i));
        for (std::size_t i = 1; i <= n; ++i) header.push_back(tag_b + "_" + std::to_string(i));
        header.push_back("diff_euclidean");
        w.row(header);
        const std::size_t nodes =
            std::min(report.trajectory_a.states.size(), report.trajectory_b.states.size());
        for (std::size_t i = 0; i < nodes; ++i) {
            std::vector<std::string> cells = {detail::format_number(report.grid[i])};
            for (double v : report.trajectory_a.states[i])
                cells.push_back(detail::format_number(v));
            for (double v : report.trajectory_b.states[i])
                cells.push_back(detail::format_number(v));
            cells.push_back(detail::format_number(report.trajectory_diff_euclidean[i]));
            w.row(cells);
        }
    }

    detail::emit_transitions_csv(dir / ("transitions_" + tag_a + ".csv"), report,
                                 report.transitions_a);
    detail::emit_transitions_csv(dir / ("transitions_" + tag_b + ".csv"), report,
                                 report.transitions_b);

    {
        detail::CsvWriter w(dir / "norms.csv");
        w.row({"t_lo", "t_hi", "metric", "value", "status"});
        for (std::size_t i = 0; i < report.transition_diff_frobenius.size(); ++i) {
            const bool ok = report.interval_status[i] == "ok";
            w.row({detail::format_number(report.grid[i]), detail::format_number(report.grid[i + 1]),
                   "transition_diff_frobenius",
                   ok ? detail::format_number(report.transition_diff_frobenius[i]) : "",
                   report.interval_status[i]});
        }
        for (std::size_t i = 0; i < report.trajectory_diff_euclidean.size(); ++i) {
            w.row({detail::format_number(report.grid[i]), detail::format_number(report.grid[i]),
                   "trajectory_diff_euclidean",
                   detail::format_number(report.trajectory_diff_euclidean[i]), "ok"});
        }
        if (!report.grid.empty()) {
            const std::string lo = detail::format_number(report.grid.front());
            const std::string hi = detail::format_number(report.grid.back());
            w.row({lo, hi, "trajectory_diff_max_over_nodes",
                   detail::format_number(report.trajectory_diff_max), "ok"});
            w.row({lo, hi, "trajectory_diff_sum_over_nodes",
                   detail::format_number(report.trajectory_diff_sum), "ok"});
            w.row({lo, hi, "series_vs_quadrature_max_abs",
                   detail::format_number(report.series_vs_quadrature_max_abs), "ok"});
            w.row({lo, hi, "stepwise_vs_oneshot_frobenius",
                   detail::format_number(report.stepwise_vs_oneshot_frobenius), "ok"});
        }
    }
}

} // namespace fracdisc
