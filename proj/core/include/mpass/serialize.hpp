#pragma once

#include <string>

#include "mpass/classifier.hpp"
#include "mpass/minimax.hpp"
#include "mpass/path.hpp"
#include "mpass/tangency_sweep.hpp"

namespace mpass {

inline constexpr int kSchemaVersion = 1;

/// report.json: {"schema", "problem", "epsilon", "rounds": [{epsilon,
/// c_upper, c_history, R_estimate, ...}], "c_best", "events",
/// "classification"}.
std::string run_report_json(const MinimaxRun& run, const Classification& classification, const std::string& label);

/// Classification alone: {verdict, witness|trace, tolerances, diagnostics}.
std::string classification_json(const Classification& classification);

/// path.csv columns: t, x1..xn, f with t = i / (N - 1).
std::string path_csv(const PLPath& path);

/// sweep.csv columns: R, theta, x1..xn, f, residual, branch (-1 if none).
std::string sweep_csv(const SweepTrace& trace);

/// clusters.json: {"schema", "radii", "clusters": [{value, branch_count,
/// rate}], "plateaus", "diagnostics"}.
std::string clusters_json(const SweepTrace& trace);

/// Writes text, creating parent directories. Throws Error on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace mpass
