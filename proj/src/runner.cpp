#include "ppbench/runner.hpp"

#include "ppbench/text_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <mutex>
#include <thread>

namespace ppbench {

namespace {

using nlohmann::json;

std::string canonical_temperature(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", t);
    return buf;
}

std::string iso8601_utc(std::time_t t) {
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

json metric_set_to_json(const MetricSet& m) {
    json flags = json::array();
    for (MetricFlag f : m.degenerate_flags) flags.push_back(to_string(f));
    return json{{"precision", m.precision},
                {"recall", m.recall},
                {"f_score", m.f_score},
                {"accuracy", m.accuracy},
                {"degenerate_flags", flags}};
}

MetricSet metric_set_from_json(const json& j) {
    MetricSet m;
    m.precision = j.at("precision").get<double>();
    m.recall = j.at("recall").get<double>();
    m.f_score = j.at("f_score").get<double>();
    m.accuracy = j.at("accuracy").get<double>();
    for (const auto& f : j.at("degenerate_flags")) {
        const std::string name = f.get<std::string>();
        if (name == "precision_undefined") m.degenerate_flags.insert(MetricFlag::PrecisionUndefined);
        else if (name == "recall_undefined") m.degenerate_flags.insert(MetricFlag::RecallUndefined);
        else if (name == "f_undefined") m.degenerate_flags.insert(MetricFlag::FUndefined);
    }
    return m;
}

class SystemClock : public RunClock {
public:
    std::string start(int) override { return iso8601_utc(std::time(nullptr)); }
    std::string finish(int) override { return iso8601_utc(std::time(nullptr)); }
};

// Seconds since a fixed epoch, two ticks per run, derived from the run
// index alone so concurrent execution cannot reorder timestamps.
class LogicalClock : public RunClock {
public:
    std::string start(int run_index) override { return stamp(2 * run_index); }
    std::string finish(int run_index) override { return stamp(2 * run_index + 1); }

private:
    static std::string stamp(int ticks) {
        // 2000-01-01T00:00:00Z
        return iso8601_utc(static_cast<std::time_t>(946684800 + ticks));
    }
};

struct GridCell {
    int index;
    PromptPattern pattern;
    int temp_index;
    double temperature;
    int repetition;
};

std::vector<GridCell> grid_cells(const ExperimentPlan& plan) {
    std::vector<GridCell> cells;
    int index = 0;
    for (PromptPattern p : plan.patterns) {
        for (std::size_t t = 0; t < plan.temperatures.size(); ++t) {
            for (int rep = 0; rep < plan.repetitions; ++rep) {
                cells.push_back(GridCell{index++, p, static_cast<int>(t), plan.temperatures[t], rep});
            }
        }
    }
    return cells;
}

constexpr std::uint64_t kSampleStream = 0x53414d50; // "SAMP"
constexpr std::uint64_t kQueryStream = 0x51555259;  // "QURY"

Rng stream_rng(const ExperimentPlan& plan, const GridCell& cell, std::uint64_t purpose) {
    return Rng(derive_seed(plan.seed, {fnv1a64(to_string(plan.task)),
                                       fnv1a64(pattern_key(cell.pattern)),
                                       static_cast<std::uint64_t>(cell.temp_index),
                                       static_cast<std::uint64_t>(cell.repetition), purpose}));
}

} // namespace

void ExperimentPlan::validate() const {
    if (patterns.empty()) throw PlanError("plan has no patterns");
    if (temperatures.empty()) throw PlanError("plan has no temperatures");
    for (double t : temperatures) {
        if (t < 0.0 || t > 1.0) {
            throw PlanError("temperature " + canonical_temperature(t) + " outside [0, 1]");
        }
    }
    if (repetitions < 1) throw PlanError("repetitions must be >= 1");
    if (sample_size < 1) throw PlanError("sample_size must be >= 1");
    if (max_in_flight < 1) throw PlanError("max_in_flight must be >= 1");
    if (task == TaskKind::BinaryClassification && promise_csv.empty()) {
        throw PlanError("classification plan needs promise_csv");
    }
    if (task == TaskKind::Traceability && srs_paths.empty()) {
        throw PlanError("traceability plan needs srs_paths");
    }
}

std::string ExperimentPlan::to_json() const {
    json j;
    j["task"] = to_string(task);
    json pats = json::array();
    for (PromptPattern p : patterns) pats.push_back(pattern_key(p));
    j["patterns"] = pats;
    j["temperatures"] = temperatures;
    j["repetitions"] = repetitions;
    j["sample_size"] = sample_size;
    j["seed"] = seed;
    j["promise_csv"] = promise_csv;
    j["srs_paths"] = srs_paths;
    j["max_in_flight"] = max_in_flight;
    j["model_name"] = model_name;
    j["max_output_tokens"] = max_output_tokens;
    j["request_timeout_ms"] = request_timeout_ms;
    j["max_retries"] = max_retries;
    return j.dump();
}

ExperimentPlan ExperimentPlan::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw PlanError(std::string("unparseable plan: ") + e.what());
    }
    ExperimentPlan plan;
    try {
        const auto task = task_from_string(j.at("task").get<std::string>());
        if (!task) throw PlanError("unknown task \"" + j.at("task").get<std::string>() + "\"");
        plan.task = *task;
        if (j.contains("patterns")) {
            plan.patterns.clear();
            for (const auto& p : j.at("patterns")) {
                const auto pat = pattern_from_string(p.get<std::string>());
                if (!pat) throw PlanError("unknown pattern \"" + p.get<std::string>() + "\"");
                plan.patterns.push_back(*pat);
            }
        }
        if (j.contains("temperatures"))
            plan.temperatures = j.at("temperatures").get<std::vector<double>>();
        plan.repetitions = j.value("repetitions", plan.repetitions);
        plan.sample_size = j.value("sample_size", plan.sample_size);
        plan.seed = j.value("seed", plan.seed);
        plan.promise_csv = j.value("promise_csv", plan.promise_csv);
        if (j.contains("srs_paths"))
            plan.srs_paths = j.at("srs_paths").get<std::vector<std::string>>();
        plan.max_in_flight = j.value("max_in_flight", plan.max_in_flight);
        plan.model_name = j.value("model_name", plan.model_name);
        plan.max_output_tokens = j.value("max_output_tokens", plan.max_output_tokens);
        plan.request_timeout_ms = j.value("request_timeout_ms", plan.request_timeout_ms);
        plan.max_retries = j.value("max_retries", plan.max_retries);
    } catch (const json::exception& e) {
        throw PlanError(std::string("invalid plan: ") + e.what());
    }
    plan.validate();
    return plan;
}

ExperimentPlan ExperimentPlan::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PlanError("cannot open plan file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

std::string run_id_for(const ExperimentPlan& plan, PromptPattern pattern, double temperature,
                       int repetition) {
    std::string material = std::to_string(plan.seed);
    material += '|';
    material += to_string(plan.task);
    material += '|';
    material += pattern_key(pattern);
    material += '|';
    material += canonical_temperature(temperature);
    material += '|';
    material += std::to_string(repetition);
    return to_hex(fnv1a64(material));
}

std::string RunRecord::to_json_line() const {
    json j;
    j["type"] = "run";
    j["schema_version"] = schema_version;
    j["run_id"] = run_id;
    j["task"] = to_string(task);
    j["pattern"] = pattern_key(pattern);
    j["temperature"] = temperature;
    j["repetition"] = repetition;
    j["status"] = status == RunStatus::Ok ? "ok" : "failed";
    j["error"] = error;
    j["document"] = document;
    j["payload_ids"] = payload_ids;
    j["prompt_text"] = prompt_text;
    json turns = json::array();
    for (const ChatTurn& t : transcript) turns.push_back({{"role", t.role}, {"text", t.text}});
    j["transcript"] = turns;
    if (cls_prediction) {
        json labels = json::object();
        for (const auto& [id, cls] : cls_prediction->labels) labels[id] = to_string(cls);
        j["prediction"] = {{"labels", labels},
                           {"unparsed_ids", cls_prediction->unparsed_ids},
                           {"extracted", cls_prediction->extracted},
                           {"parse_empty", cls_prediction->parse_empty}};
    }
    if (trace_prediction) {
        j["prediction"] = {{"linked_ids", std::vector<std::string>(
                                              trace_prediction->linked_ids.begin(),
                                              trace_prediction->linked_ids.end())}};
    }
    if (confusion) {
        j["confusion"] = {{"tp", confusion->tp},
                          {"fp", confusion->fp},
                          {"fn", confusion->fn},
                          {"tn", confusion->tn}};
    }
    if (metrics) j["metrics"] = metric_set_to_json(*metrics);
    j["parse_notes"] = parse_notes;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["latency_ms"] = latency_ms;
    return j.dump();
}

RunRecord RunRecord::from_json_line(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw Error(std::string("unparseable record line: ") + e.what());
    }
    RunRecord r;
    try {
        r.schema_version = j.value("schema_version", 1);
        r.run_id = j.at("run_id").get<std::string>();
        r.task = *task_from_string(j.at("task").get<std::string>());
        r.pattern = *pattern_from_string(j.at("pattern").get<std::string>());
        r.temperature = j.at("temperature").get<double>();
        r.repetition = j.at("repetition").get<int>();
        r.status = j.at("status").get<std::string>() == "ok" ? RunStatus::Ok : RunStatus::Failed;
        r.error = j.value("error", "");
        r.document = j.value("document", "");
        r.payload_ids = j.value("payload_ids", std::vector<std::string>{});
        r.prompt_text = j.value("prompt_text", "");
        if (j.contains("transcript")) {
            for (const auto& t : j.at("transcript")) {
                r.transcript.push_back(
                    ChatTurn{t.at("role").get<std::string>(), t.at("text").get<std::string>()});
            }
        }
        if (j.contains("prediction")) {
            const json& p = j.at("prediction");
            if (r.task == TaskKind::BinaryClassification) {
                ClassificationPrediction cp;
                for (const auto& [id, cls] : p.at("labels").items()) {
                    cp.labels.emplace(id, *req_class_from_string(cls.get<std::string>()));
                }
                cp.unparsed_ids = p.value("unparsed_ids", std::vector<std::string>{});
                cp.extracted = p.value("extracted", static_cast<std::size_t>(0));
                cp.parse_empty = p.value("parse_empty", false);
                r.cls_prediction = std::move(cp);
            } else {
                TracePrediction tp;
                for (const auto& id : p.at("linked_ids")) tp.linked_ids.insert(id.get<std::string>());
                r.trace_prediction = std::move(tp);
            }
        }
        if (j.contains("confusion")) {
            const json& c = j.at("confusion");
            r.confusion = ConfusionCounts{c.at("tp").get<long long>(), c.at("fp").get<long long>(),
                                          c.at("fn").get<long long>(), c.at("tn").get<long long>()};
        }
        if (j.contains("metrics")) r.metrics = metric_set_from_json(j.at("metrics"));
        r.parse_notes = j.value("parse_notes", std::vector<std::string>{});
        r.started_at = j.value("started_at", "");
        r.finished_at = j.value("finished_at", "");
        r.latency_ms = j.value("latency_ms", 0LL);
    } catch (const json::exception& e) {
        throw Error(std::string("invalid record: ") + e.what());
    }
    return r;
}

std::shared_ptr<RunClock> make_system_clock() {
    return std::make_shared<SystemClock>();
}

std::shared_ptr<RunClock> make_logical_clock() {
    return std::make_shared<LogicalClock>();
}

OracleData LoadedTask::oracle_data() const {
    OracleData data;
    data.labels = truth_labels;
    for (const TraceDoc& d : docs) {
        OracleData::Doc entry;
        entry.ids = d.ids;
        entry.links = d.truth.links;
        data.docs.emplace(d.clean.name, std::move(entry));
    }
    return data;
}

LoadedTask load_task(const ExperimentPlan& plan) {
    LoadedTask loaded;
    if (plan.task == TaskKind::BinaryClassification) {
        loaded.labeled = load_classification_dataset(plan.promise_csv);
        if (plan.sample_size > static_cast<int>(loaded.labeled.size())) {
            throw PlanError("sample_size " + std::to_string(plan.sample_size) +
                            " exceeds dataset size " + std::to_string(loaded.labeled.size()));
        }
        for (const Requirement& r : loaded.labeled) {
            if (!r.label) {
                throw DatasetError("requirement " + r.id + " in " + plan.promise_csv +
                                   " is unlabeled; ground truth needs labels");
            }
            loaded.truth_labels.emplace(r.id, *r.label);
        }
        loaded.unlabeled = strip_labels(loaded.labeled);
    } else {
        for (const std::string& path : plan.srs_paths) {
            LoadedTask::TraceDoc d;
            d.doc = parse_srs(path);
            d.truth = extract_trace_ground_truth(d.doc);
            d.clean = clean_document(d.doc, d.truth);
            const SrsDocument reparsed = parse_srs_text(d.clean.name, d.clean.text);
            d.clean_requirements = reparsed.requirements;
            d.ids = d.doc.ids();
            for (const auto& [query, referencers] : d.truth.links) {
                if (!referencers.empty()) d.eligible_queries.push_back(query);
            }
            std::sort(d.eligible_queries.begin(), d.eligible_queries.end());
            loaded.docs.push_back(std::move(d));
        }
        bool any = false;
        for (const auto& d : loaded.docs) any = any || !d.eligible_queries.empty();
        if (!any) {
            throw DatasetError("no traceability queries with incoming links in the given SRS set");
        }
    }
    return loaded;
}

std::vector<Requirement> sample_requirements(const std::vector<Requirement>& reqs, std::size_t n,
                                             Rng& rng) {
    const std::vector<std::size_t> picks = sample_indices(rng, reqs.size(), n);
    std::vector<Requirement> out;
    out.reserve(n);
    for (std::size_t i : picks) out.push_back(reqs[i]);
    return out;
}

namespace {

RunRecord execute_run(const ExperimentPlan& plan, const LoadedTask& loaded, ChatBackend& backend,
                      const GridCell& cell, RunClock& clock) {
    RunRecord record;
    record.run_id = run_id_for(plan, cell.pattern, cell.temperature, cell.repetition);
    record.task = plan.task;
    record.pattern = cell.pattern;
    record.temperature = cell.temperature;
    record.repetition = cell.repetition;
    record.started_at = clock.start(cell.index);

    ModelConfig config;
    config.model_name = plan.model_name;
    config.temperature = cell.temperature;
    config.max_output_tokens = plan.max_output_tokens;
    config.request_timeout = std::chrono::milliseconds(plan.request_timeout_ms);
    config.max_retries = plan.max_retries;

    try {
        if (plan.task == TaskKind::BinaryClassification) {
            Rng rng = stream_rng(plan, cell, kSampleStream);
            const std::vector<Requirement> sample =
                sample_requirements(loaded.unlabeled, static_cast<std::size_t>(plan.sample_size), rng);
            const RenderedPrompt prompt = render_classification_prompt(cell.pattern, sample);
            record.document = prompt.document;
            record.payload_ids = prompt.payload_ids;
            record.prompt_text = prompt.text;
            FollowUpPolicy policy;
            policy.has_answer = [&](const std::string& text) {
                return parse_classification(text, prompt.payload_ids, cell.pattern).extracted > 0;
            };
            const RawResponse response =
                complete(backend, prompt, config, policy, cell.repetition);
            record.transcript = response.turns;
            record.latency_ms = response.latency.count();
            ClassificationPrediction pred =
                parse_classification(response.text, prompt.payload_ids, cell.pattern);
            record.parse_notes = pred.shapes;
            if (pred.parse_empty) record.parse_notes.push_back("parse_empty");
            record.confusion = score_classification(pred, loaded.truth_labels);
            record.metrics = compute_metrics(*record.confusion);
            record.cls_prediction = std::move(pred);
        } else {
            Rng rng = stream_rng(plan, cell, kQueryStream);
            // Pool of (document, query) pairs over queries that have at
            // least one incoming link, so recall is always defined.
            std::vector<std::pair<std::size_t, std::string>> pool;
            for (std::size_t d = 0; d < loaded.docs.size(); ++d) {
                for (const std::string& q : loaded.docs[d].eligible_queries) {
                    pool.emplace_back(d, q);
                }
            }
            const auto& [doc_index, query_id] = pool[rng.bounded(pool.size())];
            const LoadedTask::TraceDoc& doc = loaded.docs[doc_index];
            const auto query_it =
                std::find_if(doc.clean_requirements.begin(), doc.clean_requirements.end(),
                             [&](const Requirement& r) { return r.id == query_id; });
            if (query_it == doc.clean_requirements.end()) {
                throw DatasetError("query " + query_id + " missing from clean " + doc.doc.name);
            }
            const RenderedPrompt prompt = render_trace_prompt(cell.pattern, *query_it, doc.clean);
            record.document = prompt.document;
            record.payload_ids = prompt.payload_ids;
            record.prompt_text = prompt.text;
            std::set<std::string> universe = doc.ids;
            universe.erase(query_id);
            FollowUpPolicy policy;
            policy.has_answer = [&](const std::string& text) {
                return !parse_trace(text, query_id, doc.ids).linked_ids.empty();
            };
            const RawResponse response =
                complete(backend, prompt, config, policy, cell.repetition);
            record.transcript = response.turns;
            record.latency_ms = response.latency.count();
            TracePrediction pred = parse_trace(response.text, query_id, doc.ids);
            record.confusion = score_trace(pred, doc.truth.links.at(query_id), universe);
            record.metrics = compute_metrics(*record.confusion);
            record.trace_prediction = std::move(pred);
        }
    } catch (const std::exception& e) {
        record.status = RunStatus::Failed;
        record.error = e.what();
        record.cls_prediction.reset();
        record.trace_prediction.reset();
        record.confusion.reset();
        record.metrics.reset();
    }
    record.finished_at = clock.finish(cell.index);
    return record;
}

// Runs cells [first, end) and appends records to the log in plan order.
// Workers bound the number of in-flight backend calls; the writer flushes
// slot i only after every slot below i is on disk, which keeps logs
// byte-stable for deterministic backends.
std::vector<RunRecord> run_cells(const ExperimentPlan& plan, const LoadedTask& loaded,
                                 ChatBackend& backend, const std::vector<GridCell>& cells,
                                 std::size_t first, std::ofstream& log, RunClock& clock,
                                 const RunnerOptions& options) {
    const std::size_t n = cells.size();
    std::vector<std::optional<RunRecord>> slots(n);
    const int bound = options.max_in_flight.value_or(plan.max_in_flight);
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(1, bound)), n - first);

    std::vector<RunRecord> out;
    if (first >= n) return out;

    if (workers <= 1) {
        for (std::size_t i = first; i < n; ++i) {
            RunRecord record = execute_run(plan, loaded, backend, cells[i], clock);
            log << record.to_json_line() << "\n";
            log.flush();
            if (options.on_record) options.on_record(record);
            out.push_back(std::move(record));
        }
        return out;
    }

    std::mutex mutex;
    std::condition_variable done_cv;
    std::size_t next_index = first;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i;
                {
                    std::lock_guard<std::mutex> lock(mutex);
                    if (next_index >= n) return;
                    i = next_index++;
                }
                RunRecord record = execute_run(plan, loaded, backend, cells[i], clock);
                {
                    std::lock_guard<std::mutex> lock(mutex);
                    slots[i] = std::move(record);
                }
                done_cv.notify_all();
            }
        });
    }
    for (std::size_t i = first; i < n; ++i) {
        std::unique_lock<std::mutex> lock(mutex);
        done_cv.wait(lock, [&] { return slots[i].has_value(); });
        RunRecord record = std::move(*slots[i]);
        slots[i].reset();
        lock.unlock();
        log << record.to_json_line() << "\n";
        log.flush();
        if (options.on_record) options.on_record(record);
        out.push_back(std::move(record));
    }
    for (std::thread& t : pool) t.join();
    return out;
}

json plan_header(const ExperimentPlan& plan) {
    json j;
    j["type"] = "plan";
    j["schema_version"] = 1;
    j["plan"] = json::parse(plan.to_json());
    return j;
}

} // namespace

std::vector<RunRecord> run_experiment(const ExperimentPlan& plan, ChatBackend& backend,
                                      const std::filesystem::path& log_path,
                                      const RunnerOptions& options) {
    plan.validate();
    const LoadedTask loaded = load_task(plan);
    const std::vector<GridCell> cells = grid_cells(plan);

    if (log_path.has_parent_path()) std::filesystem::create_directories(log_path.parent_path());
    std::ofstream log(log_path, std::ios::trunc);
    if (!log) throw Error("cannot open results log for writing: " + log_path.string());
    log << plan_header(plan).dump() << "\n";
    log.flush();

    const std::shared_ptr<RunClock> clock = options.clock ? options.clock : make_logical_clock();
    return run_cells(plan, loaded, backend, cells, 0, log, *clock, options);
}

ResultsLog read_results_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open results log: " + path.string());
    ResultsLog out;
    std::string line;
    bool have_plan = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw Error("unparseable log line: " + std::string(e.what()));
        }
        const std::string type = j.value("type", "run");
        if (type == "plan") {
            out.plan = ExperimentPlan::from_json(j.at("plan").dump());
            have_plan = true;
        } else if (type == "run") {
            out.records.push_back(RunRecord::from_json_line(line));
        }
    }
    if (!have_plan) throw Error("results log has no plan header: " + path.string());
    return out;
}

std::vector<RunRecord> resume_experiment(const ExperimentPlan& plan,
                                         const std::filesystem::path& log_path,
                                         ChatBackend& backend, const RunnerOptions& options) {
    plan.validate();
    const ResultsLog existing = read_results_log(log_path);
    if (existing.plan.seed != plan.seed) {
        throw PlanError("log/plan seed mismatch: log has " + std::to_string(existing.plan.seed) +
                        ", plan has " + std::to_string(plan.seed));
    }
    if (existing.plan.to_json() != plan.to_json()) {
        throw PlanError("results log was produced by a different plan");
    }
    const std::vector<GridCell> cells = grid_cells(plan);
    if (existing.records.size() > cells.size()) {
        throw PlanError("results log has more runs than the plan defines");
    }
    for (std::size_t i = 0; i < existing.records.size(); ++i) {
        const std::string expect =
            run_id_for(plan, cells[i].pattern, cells[i].temperature, cells[i].repetition);
        if (existing.records[i].run_id != expect) {
            throw PlanError("results log is not a prefix of the plan's run order (record " +
                            std::to_string(i) + ")");
        }
    }

    const LoadedTask loaded = load_task(plan);
    std::ofstream log(log_path, std::ios::app);
    if (!log) throw Error("cannot open results log for appending: " + log_path.string());
    const std::shared_ptr<RunClock> clock = options.clock ? options.clock : make_logical_clock();
    std::vector<RunRecord> records = existing.records;
    std::vector<RunRecord> fresh = run_cells(plan, loaded, backend, cells,
                                             existing.records.size(), log, *clock, options);
    records.insert(records.end(), std::make_move_iterator(fresh.begin()),
                   std::make_move_iterator(fresh.end()));
    return records;
}

AuditResult audit_records(const ExperimentPlan& plan, const std::vector<RunRecord>& records) {
    const LoadedTask loaded = load_task(plan);
    AuditResult result;
    for (const RunRecord& record : records) {
        if (record.status != RunStatus::Ok) continue;
        ++result.checked;
        auto note = [&](const std::string& what) {
            ++result.mismatches;
            result.notes.push_back("run " + record.run_id + ": " + what);
        };
        try {
            ConfusionCounts expected;
            if (record.task == TaskKind::BinaryClassification) {
                if (!record.cls_prediction || !record.confusion || !record.metrics) {
                    note("missing prediction or scores");
                    continue;
                }
                expected = score_classification(*record.cls_prediction, loaded.truth_labels);
            } else {
                if (!record.trace_prediction || !record.confusion || !record.metrics) {
                    note("missing prediction or scores");
                    continue;
                }
                const std::string& query = record.payload_ids.at(0);
                const LoadedTask::TraceDoc* doc = nullptr;
                for (const auto& d : loaded.docs) {
                    if (d.clean.name == record.document) doc = &d;
                }
                if (!doc) {
                    note("document \"" + record.document + "\" not in plan datasets");
                    continue;
                }
                std::set<std::string> universe = doc->ids;
                universe.erase(query);
                std::set<std::string> truth;
                if (const auto it = doc->truth.links.find(query); it != doc->truth.links.end()) {
                    truth = it->second;
                }
                expected = score_trace(*record.trace_prediction, truth, universe);
            }
            if (expected != *record.confusion) {
                note("stored confusion counts do not match re-scored prediction");
                continue;
            }
            const MetricSet fresh = compute_metrics(expected);
            const MetricSet& stored = *record.metrics;
            const double eps = 1e-12;
            if (std::abs(fresh.precision - stored.precision) > eps ||
                std::abs(fresh.recall - stored.recall) > eps ||
                std::abs(fresh.f_score - stored.f_score) > eps ||
                std::abs(fresh.accuracy - stored.accuracy) > eps) {
                note("stored metrics do not match recomputation from confusion counts");
            }
        } catch (const std::exception& e) {
            note(std::string("audit error: ") + e.what());
        }
    }
    return result;
}

} // namespace ppbench
