#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "bsdelab/experiments.hpp"

namespace bsdelab {

/// Rows of strings under a header; numbers are formatted with 17 significant
/// digits so files round-trip and are byte-stable.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::string format_real(double x);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
/// One "key = value" line per entry, in order.
void write_summary(const std::filesystem::path& path, const KeyValues& kv);

/// step, state_index, t, w, Y, Z (Z is empty at the terminal layer).
CsvTable nodes_table(const BsdeSolution& sol);

CsvTable uniqueness_table(const UniquenessReport& rep);
KeyValues uniqueness_summary(const UniquenessReport& rep);

CsvTable convergence_table(const ConvergenceStudy& study);
/// n, N, wall_time: kept apart since timings differ between runs.
CsvTable convergence_timing_table(const ConvergenceStudy& study);
KeyValues convergence_summary(const ConvergenceStudy& study);

CsvTable bounds_table(const BoundsAudit& audit);
KeyValues bounds_summary(const BoundsAudit& audit);

CsvTable comparison_table(const ComparisonRun& run);
KeyValues comparison_summary(const ComparisonRun& run);

CsvTable regularize_table(const std::vector<RegularizeRow>& rows);
CsvTable solve_table(const BsdeSolution& sol);
KeyValues solve_summary(const BsdeSolution& sol);

KeyValues validation_summary(const ValidationReport& rep, const std::string& prefix);

}  // namespace bsdelab
