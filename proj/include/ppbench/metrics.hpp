#pragma once

#include "ppbench/parse.hpp"
#include "ppbench/types.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ppbench {

struct ConfusionCounts {
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
    long long tn = 0;

    long long total() const { return tp + fp + fn + tn; }
    bool operator==(const ConfusionCounts&) const = default;
};

enum class MetricFlag { PrecisionUndefined, RecallUndefined, FUndefined };

std::string to_string(MetricFlag f);

// A zero denominator yields value 0 with the matching flag set; metric
// computation never throws mid-experiment.
struct MetricSet {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    double accuracy = 0.0;
    std::set<MetricFlag> degenerate_flags;
};

struct MetricStdev {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    double accuracy = 0.0;
};

// Positive class is NF. Unparsed ids count as predicted-F; the scored
// universe is exactly the sampled ids.
ConfusionCounts score_classification(const ClassificationPrediction& pred,
                                     const std::map<std::string, ReqClass>& truth);

// Positive class is "linked". The universe is every candidate id
// (document ids minus the query); counts always sum to its size.
ConfusionCounts score_trace(const TracePrediction& pred, const std::set<std::string>& truth_links,
                            const std::set<std::string>& universe);

MetricSet compute_metrics(const ConfusionCounts& c);

struct AggregateStats {
    std::map<double, MetricSet> per_temperature_mean;
    // Primary spread estimator: population stdev of the per-temperature
    // means. Secondary: population stdev over every run, ungrouped.
    MetricStdev cross_temperature_stdev;
    MetricStdev all_runs_stdev;
    bool single_temperature = false; // fewer than two temperatures present
};

// `runs` pairs each successful run's temperature with its metrics;
// `grid` is the plan's temperature list (means are grouped against it).
AggregateStats aggregate(const std::vector<std::pair<double, MetricSet>>& runs,
                         const std::vector<double>& grid);

} // namespace ppbench
