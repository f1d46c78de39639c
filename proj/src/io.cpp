#include "fspde/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fspde/common.hpp"

namespace fspde {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string to_csv(const std::vector<std::string>& header, const Eigen::MatrixXd& rows) {
    if (static_cast<Eigen::Index>(header.size()) != rows.cols()) throw DomainError("to_csv: header width mismatch");
    std::string out;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j) out += ',';
        out += header[j];
    }
    out += '\n';
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        for (Eigen::Index j = 0; j < rows.cols(); ++j) {
            if (j) out += ',';
            out += format_double(rows(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string solution_csv(const SolutionPath& u) {
    std::vector<std::string> header{"t"};
    for (Eigen::Index j = 0; j < u.space->x.size(); ++j) header.push_back("x=" + format_double(u.space->x[j]));
    Eigen::MatrixXd rows(u.states.cols(), u.states.rows() + 1);
    rows.col(0) = u.grid.points();
    rows.rightCols(u.states.rows()) = u.states.transpose();
    return to_csv(header, rows);
}

void write_json(const std::filesystem::path& path, const Json& value) { write_file_atomic(path, value.dump(2) + "\n"); }

namespace {

// nlohmann serializes NaN as null; keep that but make it explicit.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const AlphaNorms& n) {
    return {{"alpha", num(n.alpha)},
            {"norm_alpha_1", num(n.norm_alpha_1)},
            {"norm_alpha_2_T", num(n.norm_alpha_2_T)},
            {"sup_norm", num(n.sup_norm)}};
}

Json to_json(const GaussianBoundReport& r) {
    return {{"c_prime", num(r.c_prime)},       {"fitted_c", num(r.fitted_c)},
            {"fitted_c_refined", num(r.fitted_c_refined)}, {"drift", num(r.drift)},
            {"violations", r.violations},      {"violations_loose", r.violations_loose},
            {"n_tuples", r.n_tuples},          {"pass", r.pass}};
}

Json to_json(const InequalityWitness& w) {
    Json j{{"name", w.name},
           {"max_ratio", num(w.max_ratio)},
           {"max_ratio_refined", num(w.max_ratio_refined)},
           {"drift", num(w.drift)},
           {"max_ratio_midpoint", num(w.max_ratio_midpoint)},
           {"slope", num(w.slope)},
           {"slope_target", num(w.slope_target)},
           {"slope_exact", w.slope_exact},
           {"pass", w.pass}};
    if (!std::isnan(w.slope2)) {
        j["slope2"] = num(w.slope2);
        j["slope2_target"] = num(w.slope2_target);
    }
    return j;
}

Json to_json(const Lemma1Report& r) {
    Json list = Json::array();
    for (const auto& w : r.inequalities) list.push_back(to_json(w));
    return {{"delta", r.delta}, {"inequalities", list}, {"pass", r.pass}};
}

Json to_json(const BoundReport& r) {
    return {{"lhs", num(r.lhs)}, {"rhs", num(r.rhs)}, {"r_alpha_H", num(r.r)}, {"sup_norm_alpha_1", num(r.sup_norm)},
            {"pass", r.pass}};
}

Json to_json(const HolderReport& r) {
    return {{"theta", num(r.theta)},         {"r2", num(r.r2)},
            {"prefactor", num(r.prefactor)}, {"lag_min", num(r.lag_min)},
            {"lag_max", num(r.lag_max)},     {"undefined_slope", r.undefined_slope},
            {"bound", num(r.bound)},         {"pass", r.pass}};
}

Json to_json(const FactorizationReport& r) {
    return {{"epsilon", r.epsilon},
            {"prefactor", num(r.prefactor)},
            {"sup_difference", num(r.sup_difference)},
            {"sup_reference", num(r.sup_reference)},
            {"relative", num(r.relative)}};
}

Json to_json(const ComparisonReport& r) {
    return {{"sup_distance", num(r.sup_distance)},
            {"sup_norm_reference", num(r.sup_norm_reference)},
            {"relative", num(r.relative)}};
}

Json to_json(const HypothesisReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return {{"checks", checks},
            {"theorem_b_hurst_min", num(r.theorem_b_hurst_min)},
            {"theorem_b_alpha_min", num(r.theorem_b_alpha_min)},
            {"theorem_b_alpha_max", num(r.theorem_b_alpha_max)}};
}

Json to_json(const SolutionPath& u) {
    Json history = Json::array();
    for (double h : u.history) history.push_back(num(h));
    return {{"provenance", to_string(u.provenance)},
            {"n_steps", u.grid.n_steps()},
            {"horizon", u.grid.horizon()},
            {"n_x", u.space->size()},
            {"iterations", u.iterations},
            {"history", history},
            {"norms", to_json(u.norms)}};
}

}  // namespace fspde
