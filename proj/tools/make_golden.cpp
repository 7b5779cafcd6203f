// Regenerates the committed golden artifacts: replay fixtures recorded
// from the deterministic simulated model, the results logs replayed from
// those fixtures, and the reports built from the logs. Run from the
// repository root; everything under --out is reproducible byte for byte.

#include "ppbench/backend.hpp"
#include "ppbench/report.hpp"
#include "ppbench/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace ppbench;

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

ExperimentPlan golden_plan(TaskKind task, const std::string& data_dir) {
    ExperimentPlan plan;
    plan.task = task;
    plan.temperatures = {0.0, 0.4, 1.0};
    plan.repetitions = 2;
    plan.sample_size = 8;
    plan.seed = 424242;
    plan.max_in_flight = 1;
    if (task == TaskKind::BinaryClassification) {
        plan.promise_csv = data_dir + "/promise_nfr.csv";
    } else {
        plan.srs_paths = {data_dir + "/THEMAS.txt", data_dir + "/QHEADACHE.txt"};
    }
    return plan;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regenerate golden fixtures, logs and reports"};
    std::string data_dir = "data";
    std::string out_dir = "data/golden";
    app.add_option("--data", data_dir, "dataset directory");
    app.add_option("--out", out_dir, "golden output directory");
    CLI11_PARSE(app, argc, argv);

    try {
        const std::filesystem::path out(out_dir);
        const std::filesystem::path fixtures = out / "fixtures";
        std::filesystem::remove_all(fixtures);

        std::map<TaskKind, std::filesystem::path> logs;
        for (TaskKind task : {TaskKind::BinaryClassification, TaskKind::Traceability}) {
            const ExperimentPlan plan = golden_plan(task, data_dir);
            write_file(out / ("plan_" + to_string(task) + ".json"), plan.to_json() + "\n");

            const LoadedTask loaded = load_task(plan);
            SimulatedModelBackend sim(loaded.oracle_data());
            RecordingBackend recorder(sim, fixtures);
            const std::filesystem::path recorded_log = out / ("recorded_" + to_string(task) + ".jsonl");
            run_experiment(plan, recorder, recorded_log);

            ReplayBackend replay(fixtures);
            const std::filesystem::path replay_log = out / ("results_" + to_string(task) + ".jsonl");
            run_experiment(plan, replay, replay_log);

            if (read_file(recorded_log) != read_file(replay_log)) {
                throw Error("replayed log differs from the recorded log for " + to_string(task));
            }
            std::filesystem::remove(recorded_log);
            logs.emplace(task, replay_log);
        }

        std::map<TaskKind, TaskTable> tables;
        for (const auto& [task, path] : logs) {
            const ResultsLog log = read_results_log(path);
            tables.emplace(task, build_metric_tables(log.records, log.plan.temperatures, task));
        }
        const std::vector<PatternRanking> rankings = rank_patterns(tables);
        for (ReportFormat format : {ReportFormat::Markdown, ReportFormat::Csv, ReportFormat::Json}) {
            for (const auto& [name, content] : emit_report(tables, rankings, format)) {
                write_file(out / "report" / name, content);
            }
        }
        std::cout << "golden artifacts written to " << out_dir << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
