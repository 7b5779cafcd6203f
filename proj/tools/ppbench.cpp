// Command-line front end: five-step workflow as verbs.
//   ingest        normalize datasets, derive ground truth and clean files
//   list-patterns show the prompt catalog
//   render        print one rendered prompt
//   run / resume  execute an experiment plan against a backend
//   score         parse (and optionally score) a single response
//   report        aggregate a results log into tables and rankings
//   audit         re-score a log and verify stored counts
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include "ppbench/backend.hpp"
#include "ppbench/ingest.hpp"
#include "ppbench/metrics.hpp"
#include "ppbench/parse.hpp"
#include "ppbench/patterns.hpp"
#include "ppbench/report.hpp"
#include "ppbench/runner.hpp"
#include "ppbench/text_util.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace ppbench;
using nlohmann::json;

std::string read_stream(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

struct BackendChoice {
    std::unique_ptr<ChatBackend> owned;
    bool deterministic = true; // logical clock unless live
};

BackendChoice make_backend(const std::string& name, const std::filesystem::path& fixtures,
                           const LoadedTask& loaded) {
    BackendChoice choice;
    if (name == "live") {
        const char* endpoint = std::getenv("PPBENCH_ENDPOINT");
        if (!endpoint || !*endpoint) {
            throw Error("live backend needs PPBENCH_ENDPOINT (chat-completions URL)");
        }
        const char* key = std::getenv("PPBENCH_API_KEY");
        choice.owned = std::make_unique<HttpChatBackend>(endpoint, key ? key : "");
        choice.deterministic = false;
    } else if (name == "replay") {
        if (fixtures.empty()) throw Error("replay backend needs --fixtures DIR");
        choice.owned = std::make_unique<ReplayBackend>(fixtures);
    } else if (name == "oracle:perfect") {
        choice.owned = make_oracle_backend(loaded.oracle_data(), OracleMode::Perfect);
    } else if (name == "oracle:empty") {
        choice.owned = make_oracle_backend(loaded.oracle_data(), OracleMode::Empty);
    } else if (name == "oracle:inverted") {
        choice.owned = make_oracle_backend(loaded.oracle_data(), OracleMode::Inverted);
    } else {
        throw Error("unknown backend \"" + name +
                    "\" (expected live, replay, oracle:perfect, oracle:empty, oracle:inverted)");
    }
    return choice;
}

int run_or_resume(bool resume, const std::string& plan_path, const std::string& backend_name,
                  const std::filesystem::path& fixtures, const std::filesystem::path& out_dir,
                  const std::string& log_override, std::optional<std::uint64_t> seed_override) {
    ExperimentPlan plan = ExperimentPlan::load(plan_path);
    if (seed_override) plan.seed = *seed_override;
    const LoadedTask loaded = load_task(plan);
    BackendChoice backend = make_backend(backend_name, fixtures, loaded);

    std::filesystem::path log_path = log_override.empty()
                                         ? out_dir / ("results_" + to_string(plan.task) + ".jsonl")
                                         : std::filesystem::path(log_override);
    RunnerOptions options;
    options.clock = backend.deterministic ? make_logical_clock() : make_system_clock();
    int ok = 0;
    int failed = 0;
    options.on_record = [&](const RunRecord& r) {
        if (r.status == RunStatus::Ok) ++ok;
        else ++failed;
        std::cerr << "[" << (ok + failed) << "/" << plan.total_runs() << "] "
                  << pattern_key(r.pattern) << " t=" << r.temperature << " rep=" << r.repetition
                  << (r.status == RunStatus::Ok ? "" : " FAILED") << "\n";
    };
    const std::vector<RunRecord> records =
        resume ? resume_experiment(plan, log_path, *backend.owned, options)
               : run_experiment(plan, *backend.owned, log_path, options);
    std::cout << "wrote " << log_path.string() << ": " << records.size() << " records, " << failed
              << " failed\n";
    return 0;
}

int cmd_ingest(const std::string& promise, const std::vector<std::string>& srs_files,
               const std::filesystem::path& out_dir) {
    if (promise.empty() && srs_files.empty()) {
        throw Error("ingest needs --promise and/or --srs");
    }
    if (!promise.empty()) {
        const auto reqs = load_classification_dataset(promise);
        int f = 0;
        int nf = 0;
        for (const Requirement& r : reqs) {
            if (r.label == ReqClass::F) ++f;
            if (r.label == ReqClass::NF) ++nf;
        }
        const std::filesystem::path src(promise);
        const std::filesystem::path dst =
            (out_dir.empty() ? src.parent_path() : out_dir) /
            (src.stem().string() + ".normalized.csv");
        write_file(dst, requirements_to_csv(reqs));
        std::cout << reqs.size() << " total, " << f << " F, " << nf << " NF\n";
        std::cout << "normalized dataset: " << dst.string() << "\n";
    }
    for (const std::string& file : srs_files) {
        const SrsDocument doc = parse_srs(file);
        const TraceGroundTruth truth = extract_trace_ground_truth(doc);
        const CleanDocument clean = clean_document(doc, truth);
        const std::filesystem::path src(file);
        const std::filesystem::path dir = out_dir.empty() ? src.parent_path() : out_dir;
        const std::filesystem::path truth_path = dir / (src.stem().string() + ".ground_truth.json");
        const std::filesystem::path clean_path = dir / (src.stem().string() + ".clean.txt");
        write_file(truth_path, ground_truth_to_json(truth));
        write_file(clean_path, clean.text);
        std::cout << doc.name << ": " << doc.requirements.size() << " requirements, "
                  << truth.links.size() << " linked queries\n";
        std::cout << "ground truth: " << truth_path.string() << "\n";
        std::cout << "clean document: " << clean_path.string() << "\n";
    }
    return 0;
}

int cmd_render(const std::string& pattern_name, const std::string& task_name,
               const std::string& promise, int sample_size, std::uint64_t seed,
               const std::string& srs, const std::string& query_id) {
    const auto pattern = pattern_from_string(pattern_name);
    if (!pattern) throw Error("unknown pattern \"" + pattern_name + "\"");
    const auto task = task_from_string(task_name);
    if (!task) throw Error("unknown task \"" + task_name + "\"");
    if (*task == TaskKind::BinaryClassification) {
        if (promise.empty()) throw Error("render classification needs --promise CSV");
        const auto reqs = strip_labels(load_classification_dataset(promise));
        Rng rng(derive_seed(seed, {fnv1a64("render")}));
        const auto sample =
            sample_requirements(reqs, static_cast<std::size_t>(sample_size), rng);
        std::cout << render_classification_prompt(*pattern, sample).text;
    } else {
        if (srs.empty()) throw Error("render traceability needs --srs FILE");
        const SrsDocument doc = parse_srs(srs);
        const TraceGroundTruth truth = extract_trace_ground_truth(doc);
        const CleanDocument clean = clean_document(doc, truth);
        const SrsDocument reparsed = parse_srs_text(clean.name, clean.text);
        std::string qid = query_id;
        if (qid.empty()) {
            if (truth.links.empty()) throw Error("document has no linked queries");
            qid = truth.links.begin()->first;
        }
        const auto it = std::find_if(reparsed.requirements.begin(), reparsed.requirements.end(),
                                     [&](const Requirement& r) { return r.id == qid; });
        if (it == reparsed.requirements.end()) {
            throw Error("query id " + qid + " not found in " + doc.name);
        }
        std::cout << render_trace_prompt(*pattern, *it, clean).text;
    }
    return 0;
}

int cmd_score(const std::string& task_name, const std::string& pattern_name,
              const std::string& response_file, const std::string& sample_ids_csv,
              const std::string& truth_csv, const std::string& srs, const std::string& query_id) {
    const auto task = task_from_string(task_name);
    if (!task) throw Error("unknown task \"" + task_name + "\"");
    std::string response;
    if (response_file.empty() || response_file == "-") {
        response = read_stream(std::cin);
    } else {
        std::ifstream in(response_file, std::ios::binary);
        if (!in) throw Error("cannot open response file " + response_file);
        response = read_stream(in);
    }

    json out;
    if (*task == TaskKind::BinaryClassification) {
        const auto pattern = pattern_from_string(pattern_name);
        if (!pattern) throw Error("classification scoring needs --pattern");
        std::vector<std::string> sample_ids;
        std::map<std::string, ReqClass> truth;
        if (!truth_csv.empty()) {
            for (const Requirement& r : load_classification_dataset(truth_csv)) {
                if (r.label) truth.emplace(r.id, *r.label);
            }
        }
        if (!sample_ids_csv.empty()) {
            std::stringstream ss(sample_ids_csv);
            std::string id;
            while (std::getline(ss, id, ',')) {
                if (!id.empty()) sample_ids.push_back(id);
            }
        } else if (!truth.empty()) {
            for (const auto& [id, cls] : truth) sample_ids.push_back(id);
        } else {
            throw Error("classification scoring needs --sample-ids or --truth");
        }
        const ClassificationPrediction pred = parse_classification(response, sample_ids, *pattern);
        json labels = json::object();
        for (const auto& [id, cls] : pred.labels) labels[id] = to_string(cls);
        out["prediction"] = {{"labels", labels},
                             {"unparsed_ids", pred.unparsed_ids},
                             {"parse_empty", pred.parse_empty},
                             {"shapes", pred.shapes}};
        if (!truth.empty()) {
            const ConfusionCounts c = score_classification(pred, truth);
            const MetricSet m = compute_metrics(c);
            out["confusion"] = {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
            out["metrics"] = {{"precision", m.precision},
                              {"recall", m.recall},
                              {"f_score", m.f_score},
                              {"accuracy", m.accuracy}};
        }
    } else {
        if (srs.empty() || query_id.empty()) {
            throw Error("traceability scoring needs --srs and --query");
        }
        const SrsDocument doc = parse_srs(srs);
        const TraceGroundTruth truth = extract_trace_ground_truth(doc);
        const TracePrediction pred = parse_trace(response, query_id, doc.ids());
        out["prediction"] = {{"linked_ids", std::vector<std::string>(pred.linked_ids.begin(),
                                                                     pred.linked_ids.end())}};
        std::set<std::string> universe = doc.ids();
        universe.erase(query_id);
        std::set<std::string> links;
        if (const auto it = truth.links.find(query_id); it != truth.links.end()) links = it->second;
        const ConfusionCounts c = score_trace(pred, links, universe);
        const MetricSet m = compute_metrics(c);
        out["confusion"] = {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
        out["metrics"] = {{"precision", m.precision},
                          {"recall", m.recall},
                          {"f_score", m.f_score},
                          {"accuracy", m.accuracy}};
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_report(const std::vector<std::string>& logs, const std::string& format_name,
               const std::filesystem::path& out_dir) {
    ReportFormat format = ReportFormat::Markdown;
    if (format_name == "csv") format = ReportFormat::Csv;
    else if (format_name == "json") format = ReportFormat::Json;
    else if (format_name != "markdown") throw Error("unknown format \"" + format_name + "\"");

    std::map<TaskKind, std::vector<RunRecord>> by_task;
    std::map<TaskKind, std::vector<double>> grids;
    for (const std::string& path : logs) {
        ResultsLog log = read_results_log(path);
        auto& bucket = by_task[log.plan.task];
        bucket.insert(bucket.end(), log.records.begin(), log.records.end());
        if (grids.count(log.plan.task) && grids[log.plan.task] != log.plan.temperatures) {
            throw Error("logs for " + to_string(log.plan.task) +
                        " disagree on the temperature grid");
        }
        grids[log.plan.task] = log.plan.temperatures;
    }
    std::map<TaskKind, TaskTable> tables;
    for (const auto& [task, records] : by_task) {
        tables.emplace(task, build_metric_tables(records, grids[task], task));
    }
    std::vector<PatternRanking> rankings;
    std::string note;
    try {
        rankings = rank_patterns(tables);
        if (tables.size() == 1) {
            note = "Overall ranking omitted: only one task present in the supplied logs.";
        }
    } catch (const Error& e) {
        note = std::string("Rankings omitted: ") + e.what();
    }
    const auto files = emit_report(tables, rankings, format, note);
    for (const auto& [name, content] : files) {
        const std::filesystem::path path = out_dir / name;
        write_file(path, content);
        std::cout << "wrote " << path.string() << "\n";
    }
    return 0;
}

int cmd_audit(const std::string& log_path) {
    const ResultsLog log = read_results_log(log_path);
    const AuditResult result = audit_records(log.plan, log.records);
    std::cout << "audited " << result.checked << " records, " << result.mismatches
              << " mismatches\n";
    for (const std::string& n : result.notes) std::cout << n << "\n";
    if (result.mismatches > 0) return 2;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prompt-pattern benchmarking for requirements engineering tasks"};
    app.require_subcommand(1);

    // ingest
    std::string ingest_promise;
    std::vector<std::string> ingest_srs;
    std::string ingest_out;
    auto* ingest = app.add_subcommand("ingest", "Normalize datasets and derive ground truth");
    ingest->add_option("--promise", ingest_promise, "labelled classification CSV");
    ingest->add_option("--srs", ingest_srs, "plain-text SRS file(s)");
    ingest->add_option("--out", ingest_out, "output directory (default: alongside inputs)");

    // list-patterns
    std::string catalog_out;
    auto* list = app.add_subcommand("list-patterns", "Show the prompt pattern catalog");
    list->add_option("--catalog", catalog_out, "also write the JSON catalog to this file");

    // render
    std::string render_pattern = "template";
    std::string render_task = "classification";
    std::string render_promise;
    std::string render_srs;
    std::string render_query;
    int render_sample = 5;
    std::uint64_t render_seed = 0;
    auto* render = app.add_subcommand("render", "Render one prompt to stdout");
    render->add_option("--pattern", render_pattern, "prompt pattern");
    render->add_option("--task", render_task, "classification or traceability");
    render->add_option("--promise", render_promise, "classification CSV");
    render->add_option("--sample-size", render_sample, "requirements to embed");
    render->add_option("--seed", render_seed, "sampling seed");
    render->add_option("--srs", render_srs, "SRS file (traceability)");
    render->add_option("--query", render_query, "query requirement id");

    // run / resume
    std::string run_plan;
    std::string run_backend = "replay";
    std::string run_fixtures;
    std::string run_out = ".";
    std::string run_log;
    std::uint64_t run_seed = 0;
    bool run_seed_set = false;
    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("--plan", run_plan, "experiment plan JSON")->required();
        cmd->add_option("--backend", run_backend,
                        "live, replay, oracle:perfect, oracle:empty, oracle:inverted");
        cmd->add_option("--fixtures", run_fixtures, "fixture directory (replay)");
        cmd->add_option("--out", run_out, "output directory for the results log");
        cmd->add_option("--log", run_log, "results log path (overrides --out)");
        cmd->add_option("--seed", run_seed, "override the plan seed")
            ->each([&](const std::string&) { run_seed_set = true; });
    };
    auto* run = app.add_subcommand("run", "Execute an experiment plan");
    add_run_flags(run);
    auto* resume = app.add_subcommand("resume", "Continue a partial results log");
    add_run_flags(resume);

    // score
    std::string score_task = "classification";
    std::string score_pattern = "template";
    std::string score_response;
    std::string score_sample_ids;
    std::string score_truth;
    std::string score_srs;
    std::string score_query;
    auto* score = app.add_subcommand("score", "Parse and score one response (stdin by default)");
    score->add_option("--task", score_task, "classification or traceability");
    score->add_option("--pattern", score_pattern, "pattern the response came from");
    score->add_option("--response", score_response, "response file, '-' for stdin");
    score->add_option("--sample-ids", score_sample_ids, "comma-separated sampled ids");
    score->add_option("--truth", score_truth, "labelled CSV for scoring");
    score->add_option("--srs", score_srs, "SRS file (traceability)");
    score->add_option("--query", score_query, "query requirement id");

    // report
    std::vector<std::string> report_logs;
    std::string report_format = "markdown";
    std::string report_out = ".";
    auto* report = app.add_subcommand("report", "Aggregate results logs into tables/rankings");
    report->add_option("--log", report_logs, "results log(s)")->required();
    report->add_option("--format", report_format, "markdown, csv or json");
    report->add_option("--out", report_out, "output directory");

    // audit
    std::string audit_log;
    auto* audit = app.add_subcommand("audit", "Re-score a results log and verify stored counts");
    audit->add_option("--log", audit_log, "results log")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*ingest) return cmd_ingest(ingest_promise, ingest_srs, ingest_out);
        if (*list) {
            for (const auto& [pattern, description] : list_patterns()) {
                std::cout << pattern_display(pattern) << " - " << description << "\n";
            }
            if (!catalog_out.empty()) {
                write_file(catalog_out, catalog_to_json());
            }
            return 0;
        }
        if (*render) {
            return cmd_render(render_pattern, render_task, render_promise, render_sample,
                              render_seed, render_srs, render_query);
        }
        if (*run || *resume) {
            return run_or_resume(resume->parsed(), run_plan, run_backend, run_fixtures, run_out,
                                 run_log,
                                 run_seed_set ? std::optional<std::uint64_t>(run_seed)
                                              : std::nullopt);
        }
        if (*score) {
            return cmd_score(score_task, score_pattern, score_response, score_sample_ids,
                             score_truth, score_srs, score_query);
        }
        if (*report) return cmd_report(report_logs, report_format, report_out);
        if (*audit) return cmd_audit(audit_log);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
