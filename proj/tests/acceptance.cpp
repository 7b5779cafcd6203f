// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails. Offline by construction; the only backends used
// are oracles and committed replay fixtures.

#include "ppbench/backend.hpp"
#include "ppbench/ingest.hpp"
#include "ppbench/metrics.hpp"
#include "ppbench/parse.hpp"
#include "ppbench/report.hpp"
#include "ppbench/runner.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace ppbench;
using testsupport::data_dir;
using testsupport::read_file;
using testsupport::unique_temp_dir;

namespace {

struct Criterion {
    int number;
    std::string name;
    double budget_seconds; // 0 = untimed
    std::function<void(std::ostringstream&)> body;
};

int failures = 0;

void check(bool condition, const std::string& what, std::ostringstream& detail) {
    if (!condition) {
        detail << "    FAILED: " << what << "\n";
        throw std::runtime_error(what);
    }
}

ExperimentPlan default_plan(TaskKind task) {
    ExperimentPlan plan;
    plan.task = task;
    plan.temperatures = {0.0, 0.4, 1.0};
    plan.repetitions = 5;
    plan.sample_size = 50;
    plan.seed = 20240901;
    plan.max_in_flight = 1;
    if (task == TaskKind::BinaryClassification) {
        plan.promise_csv = (data_dir() / "promise_nfr.csv").string();
    } else {
        plan.srs_paths = {(data_dir() / "THEMAS.txt").string(),
                          (data_dir() / "QHEADACHE.txt").string()};
    }
    return plan;
}

// --- criterion bodies -----------------------------------------------------

void dataset_fidelity(std::ostringstream& d) {
    const auto reqs = load_classification_dataset(data_dir() / "promise_nfr.csv");
    long long f = 0;
    long long nf = 0;
    for (const Requirement& r : reqs) {
        if (r.label == ReqClass::F) ++f;
        if (r.label == ReqClass::NF) ++nf;
    }
    check(reqs.size() == 621, "expected 621 requirements, got " + std::to_string(reqs.size()), d);
    check(f == 253, "expected 253 F, got " + std::to_string(f), d);
    check(nf == 368, "expected 368 NF, got " + std::to_string(nf), d);
}

void metric_oracle_equivalence(std::ostringstream& d) {
    std::mt19937 gen(77);
    std::uniform_int_distribution<long long> counts(0, 500);
    int rounds = 0;
    while (rounds < 1000) {
        const ConfusionCounts c{counts(gen), counts(gen), counts(gen), counts(gen)};
        if (c.total() == 0) continue;
        ++rounds;
        const MetricSet m = compute_metrics(c);
        const testoracle::Metrics o = testoracle::metrics_from_counts(c.tp, c.fp, c.fn, c.tn);
        check(std::abs(m.precision - o.precision) <= 1e-12, "precision mismatch", d);
        check(std::abs(m.recall - o.recall) <= 1e-12, "recall mismatch", d);
        check(std::abs(m.f_score - o.f_score) <= 1e-12, "f mismatch", d);
        check(std::abs(m.accuracy - o.accuracy) <= 1e-12, "accuracy mismatch", d);
    }

    std::uniform_int_distribution<int> size(1, 60);
    std::uniform_int_distribution<int> coin(0, 2);
    for (int round = 0; round < 1000; ++round) {
        std::map<std::string, ReqClass> truth;
        ClassificationPrediction pred;
        const int n = size(gen);
        for (int i = 0; i < n; ++i) {
            const std::string id = std::to_string(i);
            truth[id] = coin(gen) == 0 ? ReqClass::F : ReqClass::NF;
            switch (coin(gen)) {
            case 0: pred.labels[id] = ReqClass::F; break;
            case 1: pred.labels[id] = ReqClass::NF; break;
            default: pred.unparsed_ids.push_back(id); break;
            }
        }
        const ConfusionCounts mine = score_classification(pred, truth);
        check(mine == testoracle::classification_tally(pred, truth),
              "classification scorer disagrees with per-id tally", d);
        const MetricSet m = compute_metrics(mine);
        const testoracle::Metrics o =
            testoracle::metrics_from_counts(mine.tp, mine.fp, mine.fn, mine.tn);
        check(std::abs(m.f_score - o.f_score) <= 1e-12, "classification f mismatch", d);

        std::set<std::string> universe;
        std::set<std::string> links;
        TracePrediction trace;
        const int u = size(gen);
        for (int i = 0; i < u; ++i) {
            const std::string id = "7." + std::to_string(i);
            universe.insert(id);
            if (coin(gen) == 0) links.insert(id);
            if (coin(gen) == 0) trace.linked_ids.insert(id);
        }
        const ConfusionCounts t = score_trace(trace, links, universe);
        check(t == testoracle::trace_set_tally(trace.linked_ids, links, universe),
              "trace scorer disagrees with set oracle", d);
    }
    d << "    2000 randomized instances per family compared\n";
}

void oracle_backend_end_to_end(std::ostringstream& d) {
    for (TaskKind task : {TaskKind::BinaryClassification, TaskKind::Traceability}) {
        const ExperimentPlan plan = default_plan(task);
        const LoadedTask loaded = load_task(plan);

        auto perfect = make_oracle_backend(loaded.oracle_data(), OracleMode::Perfect);
        const auto dir = unique_temp_dir("acc3");
        const auto records = run_experiment(plan, *perfect, dir / "perfect.jsonl");
        check(static_cast<int>(records.size()) == 75, "expected 75 runs", d);
        std::vector<std::pair<double, MetricSet>> runs;
        for (const RunRecord& r : records) {
            check(r.status == RunStatus::Ok, "perfect run failed", d);
            check(r.metrics->precision == 1.0 && r.metrics->recall == 1.0 &&
                      r.metrics->f_score == 1.0 && r.metrics->accuracy == 1.0,
                  "perfect oracle run not all 1.0", d);
            runs.emplace_back(r.temperature, *r.metrics);
        }
        const AggregateStats stats = aggregate(runs, plan.temperatures);
        check(stats.cross_temperature_stdev.precision == 0.0 &&
                  stats.cross_temperature_stdev.recall == 0.0 &&
                  stats.cross_temperature_stdev.f_score == 0.0 &&
                  stats.cross_temperature_stdev.accuracy == 0.0,
              "perfect oracle stdev not zero", d);
        check(stats.all_runs_stdev.f_score == 0.0, "all-runs stdev not zero", d);

        auto empty = make_oracle_backend(loaded.oracle_data(), OracleMode::Empty);
        const auto empty_records = run_experiment(plan, *empty, dir / "empty.jsonl");
        for (const RunRecord& r : empty_records) {
            check(r.status == RunStatus::Ok, "empty run failed", d);
            check(r.metrics->recall == 0.0, "empty oracle recall must be 0", d);
            if (task == TaskKind::Traceability) {
                const std::string& query = r.payload_ids.at(0);
                const LoadedTask::TraceDoc* doc = nullptr;
                for (const auto& candidate : loaded.docs) {
                    if (candidate.clean.name == r.document) doc = &candidate;
                }
                check(doc != nullptr, "document missing", d);
                std::set<std::string> universe = doc->ids;
                universe.erase(query);
                const ConfusionCounts expected = testoracle::trace_set_tally(
                    {}, doc->truth.links.at(query), universe);
                check(*r.confusion == expected, "empty oracle counts disagree with set oracle",
                      d);
                check(std::abs(r.metrics->accuracy -
                               double(expected.tn) / double(universe.size())) <= 1e-12,
                      "accuracy != |TN|/|universe|", d);
            }
        }
    }
    d << "    75 perfect + 75 empty runs per task\n";
}

void determinism(std::ostringstream& d) {
    const auto dir = unique_temp_dir("acc4");
    for (TaskKind task : {TaskKind::BinaryClassification, TaskKind::Traceability}) {
        const ExperimentPlan plan =
            ExperimentPlan::load("data/golden/plan_" + to_string(task) + ".json");
        std::map<std::string, std::string> outputs;
        for (const char* tag : {"first", "second"}) {
            ReplayBackend replay("data/golden/fixtures");
            const auto log = dir / (to_string(task) + "_" + tag + ".jsonl");
            run_experiment(plan, replay, log);
            const ResultsLog parsed = read_results_log(log);
            TaskTable table =
                build_metric_tables(parsed.records, parsed.plan.temperatures, task);
            std::map<TaskKind, TaskTable> tables;
            tables.emplace(task, std::move(table));
            const auto report =
                emit_report(tables, {}, ReportFormat::Markdown, "single-task determinism check");
            outputs[std::string("log_") + tag] = read_file(log);
            outputs[std::string("report_") + tag] = report.at("report.md");
        }
        check(outputs.at("log_first") == outputs.at("log_second"),
              "logs differ between executions", d);
        check(outputs.at("report_first") == outputs.at("report_second"),
              "reports differ between executions", d);
    }
    d << "    two replay executions per task compared byte for byte\n";
}

void ground_truth_extraction(std::ostringstream& d) {
    for (const char* name : {"THEMAS.txt", "QHEADACHE.txt"}) {
        const SrsDocument doc = parse_srs(data_dir() / name);
        const TraceGroundTruth truth = extract_trace_ground_truth(doc);
        check(truth.links == testoracle::quadratic_links(doc),
              std::string(name) + ": extraction disagrees with quadratic oracle", d);
        const CleanDocument clean = clean_document(doc, truth);
        const SrsDocument reparsed = parse_srs_text(clean.name, clean.text);
        check(extract_trace_ground_truth(reparsed).links.empty(),
              std::string(name) + ": clean document still has links", d);
    }
    d << "    THEMAS-style and QHEADACHE-style fixtures verified\n";
}

void parser_partition_property(std::ostringstream& d) {
    std::mt19937 gen(4242);
    const std::vector<std::vector<std::string>> samples = {
        {"1", "2", "3"},
        {"10", "20", "30", "40", "55"},
        {"3.2.1", "3.2.2", "7"},
    };
    const std::set<std::string> doc_ids = {"3.2.1", "3.2.2", "3.2.3", "4.4.4.4", "2.2"};
    const std::string alphabet = "abcdefghijkNF F()=:;,.?-\n0123456789ID list non-functional";
    std::uniform_int_distribution<std::size_t> len(0, 200);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<std::size_t> which(0, samples.size() - 1);
    std::uniform_int_distribution<int> pat(0, kPatternCount - 1);
    for (int i = 0; i < 10000; ++i) {
        std::string text;
        const std::size_t n = len(gen);
        for (std::size_t k = 0; k < n; ++k) text.push_back(alphabet[pick(gen)]);
        const auto& sample = samples[which(gen)];
        const PromptPattern pattern = all_patterns()[static_cast<std::size_t>(pat(gen))];
        const ClassificationPrediction pred = parse_classification(text, sample, pattern);
        std::set<std::string> seen;
        for (const auto& [id, cls] : pred.labels) {
            check(seen.insert(id).second, "id labelled twice", d);
        }
        for (const std::string& id : pred.unparsed_ids) {
            check(seen.insert(id).second, "id in both labels and unparsed", d);
        }
        check(seen == std::set<std::string>(sample.begin(), sample.end()),
              "labels + unparsed != sample", d);

        const TracePrediction trace = parse_trace(text, "3.2.1", doc_ids);
        for (const std::string& id : trace.linked_ids) {
            check(doc_ids.count(id) == 1 && id != "3.2.1", "trace output escaped universe", d);
        }
    }
    d << "    10000 fuzzed responses, partition and universe bounds held\n";
}

void ranking_reproduction(std::ostringstream& d) {
    // Synthetic per-pattern scores mirroring the published qualitative
    // ordering: Question Refinement strongest and steadiest, Context
    // Manager weakest and most temperature-sensitive, in both tasks.
    const std::map<PromptPattern, double> f = {{PromptPattern::QuestionRefinement, 0.90},
                                               {PromptPattern::CognitiveVerifier, 0.85},
                                               {PromptPattern::Persona, 0.80},
                                               {PromptPattern::Template, 0.75},
                                               {PromptPattern::ContextManager, 0.70}};
    const std::map<PromptPattern, double> wobble = {{PromptPattern::QuestionRefinement, 0.004},
                                                    {PromptPattern::CognitiveVerifier, 0.010},
                                                    {PromptPattern::Persona, 0.018},
                                                    {PromptPattern::Template, 0.028},
                                                    {PromptPattern::ContextManager, 0.050}};
    const std::vector<double> temps = {0.0, 0.4, 1.0};
    std::map<TaskKind, TaskTable> tables;
    for (TaskKind task : {TaskKind::BinaryClassification, TaskKind::Traceability}) {
        std::vector<RunRecord> records;
        for (const auto& [pattern, base] : f) {
            for (std::size_t t = 0; t < temps.size(); ++t) {
                for (int rep = 0; rep < 5; ++rep) {
                    RunRecord r;
                    r.run_id = to_string(task) + pattern_key(pattern) + std::to_string(t) + "_" +
                               std::to_string(rep);
                    r.task = task;
                    r.pattern = pattern;
                    r.temperature = temps[t];
                    r.repetition = rep;
                    r.status = RunStatus::Ok;
                    MetricSet m;
                    const double w = wobble.at(pattern) * (static_cast<double>(t) - 1.0);
                    m.precision = base + w;
                    m.recall = base - w;
                    m.f_score = base + w / 2.0;
                    m.accuracy = base;
                    r.metrics = m;
                    r.confusion = ConfusionCounts{1, 1, 1, 1};
                    records.push_back(std::move(r));
                }
            }
        }
        tables.emplace(task, build_metric_tables(records, temps, task));
    }
    const auto rankings = rank_patterns(tables);
    check(rankings.size() == 3, "expected three ranking scopes", d);
    const std::vector<PromptPattern> expected = {
        PromptPattern::QuestionRefinement, PromptPattern::CognitiveVerifier,
        PromptPattern::Persona, PromptPattern::Template, PromptPattern::ContextManager};
    for (const PatternRanking& ranking : rankings) {
        check(ranking.entries.size() == 5, "ranking must list five patterns", d);
        for (std::size_t i = 0; i < 5; ++i) {
            check(ranking.entries[i].pattern == expected[i],
                  to_string(ranking.scope) + " rank " + std::to_string(i + 1) + " is " +
                      pattern_display(ranking.entries[i].pattern) + ", expected " +
                      pattern_display(expected[i]),
                  d);
        }
    }
    d << "    table-5 order reproduced in classification, traceability and overall scopes\n";
}

void recorded_fixture_golden(std::ostringstream& d) {
    // Hosted-model numbers are not reproducible offline; the recorded
    // fixtures and the golden log stand in for them. Replaying the
    // committed fixtures must reproduce the committed artifacts exactly.
    std::map<TaskKind, TaskTable> tables;
    for (TaskKind task : {TaskKind::BinaryClassification, TaskKind::Traceability}) {
        const ExperimentPlan plan =
            ExperimentPlan::load("data/golden/plan_" + to_string(task) + ".json");
        ReplayBackend replay("data/golden/fixtures");
        const auto dir = unique_temp_dir("acc8");
        const auto log = dir / "log.jsonl";
        run_experiment(plan, replay, log);
        const std::string committed = "data/golden/results_" + to_string(task) + ".jsonl";
        check(read_file(log) == read_file(committed),
              "replayed log differs from " + committed, d);
        const ResultsLog parsed = read_results_log(log);
        tables.emplace(task, build_metric_tables(parsed.records, parsed.plan.temperatures, task));
        const AuditResult audit = audit_records(parsed.plan, parsed.records);
        check(audit.mismatches == 0, "golden log fails the self-consistency audit", d);
    }
    const auto rankings = rank_patterns(tables);
    for (ReportFormat format : {ReportFormat::Markdown, ReportFormat::Csv, ReportFormat::Json}) {
        for (const auto& [name, content] : emit_report(tables, rankings, format)) {
            check(content == read_file("data/golden/report/" + name),
                  "regenerated " + name + " differs from the committed report", d);
        }
    }
    d << "    committed fixtures, logs, and all report formats reproduced\n";
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "dataset fidelity (621 total, 253 F, 368 NF)", 1.0, dataset_fidelity},
        {2, "metric oracle equivalence (randomized, 1e-12)", 10.0, metric_oracle_equivalence},
        {3, "oracle-backend end-to-end (75 runs per task)", 30.0, oracle_backend_end_to_end},
        {4, "determinism (byte-identical logs and reports)", 30.0, determinism},
        {5, "ground-truth extraction vs quadratic oracle", 0.0, ground_truth_extraction},
        {6, "parser partition property (10000 fuzzed inputs)", 0.0, parser_partition_property},
        {7, "ranking reproduction (qualitative table-5 order)", 0.0, ranking_reproduction},
        {8, "recorded-fixture golden run (live scores replaced)", 0.0, recorded_fixture_golden},
    };

    for (const Criterion& criterion : criteria) {
        std::ostringstream detail;
        const auto start = std::chrono::steady_clock::now();
        bool passed = true;
        std::string error;
        try {
            criterion.body(detail);
        } catch (const std::exception& e) {
            passed = false;
            error = e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (passed && criterion.budget_seconds > 0.0 && elapsed > criterion.budget_seconds) {
            passed = false;
            error = "exceeded time budget of " + std::to_string(criterion.budget_seconds) + "s";
        }
        char line[256];
        std::snprintf(line, sizeof(line), "criterion %d %s: %s (%.2fs)", criterion.number,
                      passed ? "PASS" : "FAIL", criterion.name.c_str(), elapsed);
        std::cout << line << "\n";
        if (!passed) {
            std::cout << "    " << error << "\n";
            ++failures;
        }
        const std::string notes = detail.str();
        if (!notes.empty()) std::cout << notes;
    }
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all 8 acceptance criteria passed\n";
    return 0;
}
