#pragma once

// Study specification files (TOML or JSON) and CSV/manifest output of study results.
//
// A file holds top-level `name`, an optional `defaults` table and an array `study` of
// tables; each study entry is merged over the defaults. Keys:
//   dgp, copula, tau, dimension, margin, n, replicates, lag_shift, randomizations, seed,
//   statistics, level, m2, m3, include_triples, mode, averaging, quantile_levels, label,
//   table_row, table_column
// When every rejection-mode study sets table_row and table_column, rejection.csv is laid out
// as a grid: one row per (table_row, statistic), one column per table_column.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gei/study.hpp"

namespace gei {

struct StudyFile {
    std::string name;
    std::vector<McStudySpec> studies;  ///< McStudySpec::name holds each study's label
    std::uint64_t source_hash = 0;     ///< FNV-1a of the file contents
    /// Grid position (table_row, table_column) of each study; empty strings when unset.
    std::vector<std::pair<std::string, std::string>> cells;
};

/// `format` is "toml" or "json". Errors are DataError of the form "study[2].tau: ...".
StudyFile parse_study_file(const std::string& text, const std::string& format);
/// Picks the format from the extension (.toml, .json).
StudyFile load_study_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes) noexcept;

/// Writes into `directory` (created if needed):
///   rejection.csv  statistic x study table of rejection percentages (rejection-mode studies)
///   quantiles.csv  statistic x (study, M, level) table (quantile-mode studies)
///   values.csv     raw combined statistic values per study and replicate
///   manifest.json  file hash, seeds, replicate counts, failures and runtimes
/// Returns the paths written.
std::vector<std::string> write_study_outputs(const std::string& directory, const StudyFile& file,
                                             const std::vector<McStudyResult>& results);

}  // namespace gei
