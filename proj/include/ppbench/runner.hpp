#pragma once

#include "ppbench/backend.hpp"
#include "ppbench/ingest.hpp"
#include "ppbench/metrics.hpp"
#include "ppbench/parse.hpp"
#include "ppbench/patterns.hpp"
#include "ppbench/rng.hpp"
#include "ppbench/types.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ppbench {

struct ExperimentPlan {
    TaskKind task = TaskKind::BinaryClassification;
    std::vector<PromptPattern> patterns = all_patterns();
    std::vector<double> temperatures = {0.0, 0.4, 1.0};
    int repetitions = 5;
    int sample_size = 50; // classification only
    std::uint64_t seed = 0;
    std::string promise_csv;            // classification dataset
    std::vector<std::string> srs_paths; // traceability documents
    int max_in_flight = 4;
    std::string model_name = "gpt-3.5-turbo";
    int max_output_tokens = 1024;
    int request_timeout_ms = 30000;
    int max_retries = 3;

    int total_runs() const {
        return static_cast<int>(patterns.size() * temperatures.size()) * repetitions;
    }

    void validate() const;
    std::string to_json() const;
    static ExperimentPlan from_json(const std::string& text);
    static ExperimentPlan load(const std::filesystem::path& path);
};

enum class RunStatus { Ok, Failed };

struct RunRecord {
    int schema_version = 1;
    std::string run_id;
    TaskKind task = TaskKind::BinaryClassification;
    PromptPattern pattern = PromptPattern::CognitiveVerifier;
    double temperature = 0.0;
    int repetition = 0;
    RunStatus status = RunStatus::Ok;
    std::string error;
    std::string document;
    std::vector<std::string> payload_ids;
    std::string prompt_text;
    std::vector<ChatTurn> transcript;
    std::optional<ClassificationPrediction> cls_prediction;
    std::optional<TracePrediction> trace_prediction;
    std::optional<ConfusionCounts> confusion;
    std::optional<MetricSet> metrics;
    std::vector<std::string> parse_notes;
    std::string started_at;
    std::string finished_at;
    long long latency_ms = 0;

    std::string to_json_line() const;
    static RunRecord from_json_line(const std::string& line);
};

// Deterministic hash of (plan seed, task, pattern, temperature, repetition).
std::string run_id_for(const ExperimentPlan& plan, PromptPattern pattern, double temperature,
                       int repetition);

// Timestamps for a run. The logical clock makes results logs byte-stable
// for deterministic backends; live runs use the system clock.
class RunClock {
public:
    virtual ~RunClock() = default;
    virtual std::string start(int run_index) = 0;
    virtual std::string finish(int run_index) = 0;
};

std::shared_ptr<RunClock> make_system_clock();
std::shared_ptr<RunClock> make_logical_clock();

struct RunnerOptions {
    std::shared_ptr<RunClock> clock;      // default: logical
    std::function<void(const RunRecord&)> on_record; // progress hook
    std::optional<int> max_in_flight;     // overrides the plan
};

// Datasets and derived ground truth for a plan.
struct LoadedTask {
    // classification
    std::vector<Requirement> labeled;
    std::vector<Requirement> unlabeled;
    std::map<std::string, ReqClass> truth_labels;
    // traceability
    struct TraceDoc {
        SrsDocument doc;
        TraceGroundTruth truth;
        CleanDocument clean;
        std::vector<Requirement> clean_requirements; // bodies from the clean text
        std::set<std::string> ids;
        std::vector<std::string> eligible_queries; // >= 1 incoming link, sorted
    };
    std::vector<TraceDoc> docs;

    OracleData oracle_data() const;
};

LoadedTask load_task(const ExperimentPlan& plan);

// n distinct requirements drawn without replacement, deterministic for a
// given generator state.
std::vector<Requirement> sample_requirements(const std::vector<Requirement>& reqs, std::size_t n,
                                             Rng& rng);

// Executes the pattern x temperature x repetition grid. Every record is
// scored and appended to the results log before the next record is
// flushed; backend failures are recorded and the grid continues.
std::vector<RunRecord> run_experiment(const ExperimentPlan& plan, ChatBackend& backend,
                                      const std::filesystem::path& log_path,
                                      const RunnerOptions& options = {});

// Skips runs already present in the log (which must be a prefix of the
// plan's run order) and executes the rest.
std::vector<RunRecord> resume_experiment(const ExperimentPlan& plan,
                                         const std::filesystem::path& log_path,
                                         ChatBackend& backend,
                                         const RunnerOptions& options = {});

struct ResultsLog {
    ExperimentPlan plan;
    std::vector<RunRecord> records;
};

ResultsLog read_results_log(const std::filesystem::path& path);

struct AuditResult {
    int checked = 0;
    int mismatches = 0;
    std::vector<std::string> notes;
};

// Re-scores every stored prediction against ground truth and re-derives
// metrics from stored confusion counts.
AuditResult audit_records(const ExperimentPlan& plan, const std::vector<RunRecord>& records);

} // namespace ppbench
