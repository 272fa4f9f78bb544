#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gkz/solver.hpp"

namespace gkz {

inline constexpr const char *kSchema = "gkz-asym/1";

// A problem file: the toric datum plus optional run settings. Column and σ
// indices are 1-based in files and 0-based in memory.
struct ProblemFile {
    ToricProblem problem;
    std::optional<IntVec> p;
    std::optional<std::vector<HybridReal>> delta; // absent means "auto"
    std::optional<double> epsilon;
    std::optional<double> rel_tol;
    std::optional<double> abs_tol;
    std::optional<std::string> mode;
};

// 17 significant digits, enough to round-trip a double.
std::string format_double(double v);
double parse_double(const std::string &text, const std::string &field);

nlohmann::ordered_json complex_to_json(Complex c);
nlohmann::ordered_json problem_to_json(const ProblemFile &pf);
// Throws ParseError naming the offending field, or SchemaVersionMismatch.
ProblemFile problem_from_json(const nlohmann::json &j);

ProblemFile load_problem(const std::string &path);
void save_problem(const std::string &path, const ProblemFile &pf);

bool same_problem(const ToricProblem &a, const ToricProblem &b);

} // namespace gkz
