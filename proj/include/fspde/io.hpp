#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "fspde/analysis.hpp"
#include "fspde/fracint.hpp"
#include "fspde/greens.hpp"
#include "fspde/noise.hpp"
#include "fspde/solver.hpp"

namespace fspde {

using Json = nlohmann::json;

/// Shortest round-trip text for a double ("%.17g"); "nan"/"inf" for non-finite values.
std::string format_double(double v);

/// Writes `content` to `path` through a sibling temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// CSV with a header row; every numeric cell formatted by format_double.
std::string to_csv(const std::vector<std::string>& header, const Eigen::MatrixXd& rows);

/// Rows are times: columns "t", then one column per spatial node "x=<x_j>".
std::string solution_csv(const SolutionPath& u);

void write_json(const std::filesystem::path& path, const Json& value);

Json to_json(const AlphaNorms& n);
Json to_json(const GaussianBoundReport& r);
Json to_json(const InequalityWitness& w);
Json to_json(const Lemma1Report& r);
Json to_json(const BoundReport& r);
Json to_json(const HolderReport& r);
Json to_json(const FactorizationReport& r);
Json to_json(const ComparisonReport& r);
Json to_json(const HypothesisReport& r);
Json to_json(const SolutionPath& u);  // metadata only: grid sizes, provenance, history, norms

}  // namespace fspde
