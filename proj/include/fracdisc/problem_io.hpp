#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fracdisc/errors.hpp"
#include "fracdisc/problem.hpp"

namespace fracdisc {

namespace detail {

inline std::string line_column_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline double require_number(const nlohmann::json& j, const std::string& field) {
    if (!j.is_number()) throw ValidationError("problem file: '" + field + "' must be a number");
    return j.get<double>();
}

inline int require_int(const nlohmann::json& j, const std::string& field) {
    if (!j.is_number_integer())
        throw ValidationError("problem file: '" + field + "' must be an integer");
    return j.get<int>();
}

inline std::vector<double> require_vector(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array()) throw ValidationError("problem file: '" + field + "' must be an array");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(require_number(e, field));
    return v;
}

} // namespace detail

// Parse and validate a problem file. Fields: A (array of row arrays), x0, p,
// q, t0, T, and exactly one of steps / grid; optional forcing (one vector per
// subinterval). Unknown fields are rejected.
inline ProblemSpec load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open problem file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("problem file " + path.string() + ": " + e.what() + " (" +
                         detail::line_column_of(text, e.byte) + ")");
    }
    if (!doc.is_object()) throw ValidationError("problem file: top level must be an object");

    static const std::set<std::string> known = {"A",     "x0",   "p",    "q",      "t0",
                                                "T",     "steps", "grid", "forcing"};
    for (const auto& [key, value] : doc.items())
        if (!known.count(key))
            throw ValidationError("problem file: unknown field '" + key + "'");
    for (const char* required : {"A", "x0", "p", "q", "t0", "T"})
        if (!doc.contains(required))
            throw ValidationError(std::string("problem file: missing field '") + required + "'");

    ProblemSpec spec;

    const auto& ja = doc["A"];
    if (!ja.is_array() || ja.empty())
        throw ValidationError("problem file: 'A' must be a nonempty array of rows");
    const std::size_t n = ja.size();
    spec.A = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = detail::require_vector(ja[i], "A");
        if (row.size() != n)
            throw ValidationError("problem file: 'A' must be square (row " + std::to_string(i) +
                                  " has " + std::to_string(row.size()) + " entries)");
        for (std::size_t j = 0; j < n; ++j) spec.A(i, j) = Complex(row[j], 0.0);
    }

    spec.x0 = detail::require_vector(doc["x0"], "x0");
    spec.order = FracOrder(detail::require_int(doc["p"], "p"), detail::require_int(doc["q"], "q"));
    spec.t0 = detail::require_number(doc["t0"], "t0");
    spec.T = detail::require_number(doc["T"], "T");
    if (!(spec.T > spec.t0)) throw ValidationError("problem file: T must exceed t0");

    const bool has_steps = doc.contains("steps");
    const bool has_grid = doc.contains("grid");
    if (has_steps == has_grid)
        throw ValidationError("problem file: exactly one of 'steps' or 'grid' is required");
    if (has_steps) {
        const int steps = detail::require_int(doc["steps"], "steps");
        if (steps < 1) throw ValidationError("problem file: 'steps' must be at least 1");
        spec.grid = ProblemSpec::uniform_grid(spec.t0, spec.T, static_cast<std::size_t>(steps));
    } else {
        spec.grid = detail::require_vector(doc["grid"], "grid");
        if (spec.grid.size() < 2)
            throw ValidationError("problem file: 'grid' needs at least two nodes");
    }

    if (doc.contains("forcing")) {
        const auto& jf = doc["forcing"];
        if (!jf.is_array())
            throw ValidationError("problem file: 'forcing' must be an array of vectors");
        PiecewiseConstantSignal sig;
        for (const auto& e : jf) sig.values.push_back(detail::require_vector(e, "forcing"));
        spec.forcing = std::move(sig);
    }

    spec.validate();
    return spec;
}

} // namespace fracdisc
