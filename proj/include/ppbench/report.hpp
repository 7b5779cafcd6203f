#pragma once

#include "ppbench/metrics.hpp"
#include "ppbench/runner.hpp"
#include "ppbench/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace ppbench {

// Aggregated view of one pattern within one task.
struct PatternRow {
    PromptPattern pattern = PromptPattern::CognitiveVerifier;
    AggregateStats stats;
    double mean_precision = 0.0; // averaged over present temperatures
    double mean_recall = 0.0;
    double mean_f = 0.0;
    double mean_accuracy = 0.0;
    bool complete = false; // every grid temperature has at least one run
    int run_count = 0;
    int degenerate_runs = 0;
    int parse_empty_runs = 0;
};

struct TaskTable {
    TaskKind task = TaskKind::BinaryClassification;
    std::vector<double> temperatures; // the plan grid
    std::vector<PatternRow> rows;     // catalog order; absent patterns omitted
    int failed_runs = 0;
};

// Rows = patterns, columns = metrics, one value per temperature, plus the
// stdev columns. Failed runs are excluded and counted.
TaskTable build_metric_tables(const std::vector<RunRecord>& records,
                              const std::vector<double>& grid_temps, TaskKind task);

enum class RankScope { BinaryClassification, Traceability, Overall };

std::string to_string(RankScope s);

struct RankingEntry {
    int rank = 0;
    PromptPattern pattern = PromptPattern::CognitiveVerifier;
    double mean_f = 0.0;
    double f_stdev = 0.0;
    double mean_precision = 0.0;
    bool tied = false; // shares a full key with a neighbour; catalog order used
};

struct PatternRanking {
    RankScope scope = RankScope::Overall;
    std::vector<RankingEntry> entries;
};

// Patterns ordered by mean F-score over temperatures (descending); ties
// break on lower cross-temperature F stdev, then higher mean precision,
// then catalog order (flagged). Overall averages the two tasks' keys and
// is present only when both tasks are.
std::vector<PatternRanking> rank_patterns(const std::map<TaskKind, TaskTable>& tables);

enum class ReportFormat { Markdown, Csv, Json };

// Deterministic report bytes: file name -> content.
std::map<std::string, std::string> emit_report(const std::map<TaskKind, TaskTable>& tables,
                                               const std::vector<PatternRanking>& rankings,
                                               ReportFormat format,
                                               const std::string& ranking_note = "");

} // namespace ppbench
