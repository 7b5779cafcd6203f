// End-to-end coverage of every CLI verb using only offline backends.
// PPBENCH_BIN points at the built binary; the working directory is the
// repository root so committed plans with relative paths resolve.
#include "test_support.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <string>

using nlohmann::json;
using testsupport::read_file;
using testsupport::unique_temp_dir;

namespace {

struct CliResult {
    int exit_code;
    std::string output; // stdout only
};

std::string binary() {
    const char* bin = std::getenv("PPBENCH_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "PPBENCH_BIN must point at the ppbench binary");
    return bin;
}

CliResult run_cli(const std::string& args, const std::string& stdin_file = "") {
    static const auto dir = unique_temp_dir("cli_out");
    static int counter = 0;
    const auto out_file = dir / ("out_" + std::to_string(counter++) + ".txt");
    std::string cmd = binary() + " " + args + " >" + out_file.string() + " 2>/dev/null";
    if (!stdin_file.empty()) cmd += " <" + stdin_file;
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = read_file(out_file);
    return result;
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

} // namespace

TEST_CASE("usage errors exit 1, unknown data exits 2") {
    CHECK(run_cli("definitely-not-a-verb").exit_code == 1);
    CHECK(run_cli("run").exit_code == 1); // missing required --plan
    CHECK(run_cli("ingest --promise /nonexistent.csv").exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("ingest prints the dataset shape and writes step-1 outputs") {
    const auto out = unique_temp_dir("cli_ingest");
    const CliResult promise =
        run_cli("ingest --promise data/promise_nfr.csv --out " + out.string());
    CHECK(promise.exit_code == 0);
    CHECK(promise.output.find("621 total, 253 F, 368 NF") != std::string::npos);
    CHECK(std::filesystem::exists(out / "promise_nfr.normalized.csv"));

    const CliResult srs = run_cli("ingest --srs data/THEMAS.txt --out " + out.string());
    CHECK(srs.exit_code == 0);
    CHECK(std::filesystem::exists(out / "THEMAS.ground_truth.json"));
    CHECK(std::filesystem::exists(out / "THEMAS.clean.txt"));
    const std::string clean = read_file(out / "THEMAS.clean.txt");
    CHECK(clean.find("http://") == std::string::npos);
}

TEST_CASE("list-patterns prints exactly five lines and can export the catalog") {
    const auto out = unique_temp_dir("cli_patterns");
    const CliResult result =
        run_cli("list-patterns --catalog " + (out / "catalog.json").string());
    CHECK(result.exit_code == 0);
    CHECK(count_lines(result.output) == 5);
    CHECK(result.output.find("Cognitive Verifier") != std::string::npos);
    CHECK(result.output.find("Template") != std::string::npos);
    const auto catalog = json::parse(read_file(out / "catalog.json"));
    CHECK(catalog.size() == 5);
}

TEST_CASE("render produces a prompt for both tasks") {
    const CliResult cls = run_cli("render --pattern template --task classification "
                                  "--promise data/promise_nfr.csv --sample-size 3 --seed 5");
    CHECK(cls.exit_code == 0);
    CHECK(cls.output.find("(ID=X) (ID=Y) (ID=Z)") != std::string::npos);

    const CliResult trc = run_cli("render --pattern persona --task traceability "
                                  "--srs data/THEMAS.txt --query 3.2.1.2");
    CHECK(trc.exit_code == 0);
    CHECK(trc.output.find("Act as a requirements engineering domain expert") == 0);
    CHECK(trc.output.find("[deprecated]") == std::string::npos);
    CHECK(trc.output.find("requirement 3.2.1.2") != std::string::npos);
}

TEST_CASE("run against the replay fixtures matches the committed golden log") {
    const auto out = unique_temp_dir("cli_run");
    const CliResult run = run_cli(
        "run --plan data/golden/plan_classification.json --backend replay "
        "--fixtures data/golden/fixtures --log " + (out / "log.jsonl").string());
    CHECK(run.exit_code == 0);
    CHECK(read_file(out / "log.jsonl") == read_file("data/golden/results_classification.jsonl"));
}

TEST_CASE("resume completes a truncated log to the same bytes") {
    const auto out = unique_temp_dir("cli_resume");
    const std::string golden = read_file("data/golden/results_traceability.jsonl");
    // keep header + first 12 records
    std::size_t pos = 0;
    for (int i = 0; i < 13; ++i) pos = golden.find('\n', pos) + 1;
    testsupport::write_file(out / "partial.jsonl", golden.substr(0, pos));

    const CliResult resume = run_cli(
        "resume --plan data/golden/plan_traceability.json --backend replay "
        "--fixtures data/golden/fixtures --log " + (out / "partial.jsonl").string());
    CHECK(resume.exit_code == 0);
    CHECK(read_file(out / "partial.jsonl") == golden);
}

TEST_CASE("run with oracle backends and audit the result") {
    const auto out = unique_temp_dir("cli_oracle");
    testsupport::write_file(out / "plan.json",
                            R"({"task":"traceability","temperatures":[0.0,1.0],)"
                            R"("repetitions":1,"seed":3,)"
                            R"("srs_paths":["data/THEMAS.txt","data/QHEADACHE.txt"]})");
    const CliResult run = run_cli("run --plan " + (out / "plan.json").string() +
                                  " --backend oracle:perfect --log " + (out / "log.jsonl").string());
    CHECK(run.exit_code == 0);
    const CliResult audit = run_cli("audit --log " + (out / "log.jsonl").string());
    CHECK(audit.exit_code == 0);
    CHECK(audit.output.find("0 mismatches") != std::string::npos);

    const CliResult empty = run_cli("run --plan " + (out / "plan.json").string() +
                                    " --backend oracle:empty --log " + (out / "log2.jsonl").string());
    CHECK(empty.exit_code == 0);
}

TEST_CASE("score reads a response from stdin and scores it against truth") {
    const auto dir = unique_temp_dir("cli_score");
    testsupport::write_file(dir / "response.txt", "ID list: 3.2.1.3; 3.2.4.2");
    const CliResult result = run_cli("score --task traceability --srs data/THEMAS.txt "
                                     "--query 3.2.1.2 --response -",
                                     (dir / "response.txt").string());
    CHECK(result.exit_code == 0);
    const auto j = json::parse(result.output);
    CHECK(j.at("confusion").at("tp").get<int>() == 2);
    CHECK(j.at("metrics").at("recall").get<double>() == 1.0);

    testsupport::write_file(dir / "cls.txt", "(ID=2)\n");
    const CliResult cls = run_cli("score --task classification --pattern template "
                                  "--sample-ids 1,2,3 --response " + (dir / "cls.txt").string());
    CHECK(cls.exit_code == 0);
    const auto cj = json::parse(cls.output);
    CHECK(cj.at("prediction").at("labels").at("2").get<std::string>() == "NF");
    CHECK(cj.at("prediction").at("labels").at("1").get<std::string>() == "F");
}

TEST_CASE("report writes the selected format and matches golden bytes") {
    const auto out = unique_temp_dir("cli_report");
    const CliResult md = run_cli(
        "report --log data/golden/results_classification.jsonl "
        "--log data/golden/results_traceability.jsonl --format markdown --out " + out.string());
    CHECK(md.exit_code == 0);
    CHECK(read_file(out / "report.md") == read_file("data/golden/report/report.md"));

    const CliResult cs = run_cli(
        "report --log data/golden/results_classification.jsonl "
        "--log data/golden/results_traceability.jsonl --format csv --out " + out.string());
    CHECK(cs.exit_code == 0);
    CHECK(read_file(out / "table_classification.csv") ==
          read_file("data/golden/report/table_classification.csv"));
    CHECK(read_file(out / "rankings.csv") == read_file("data/golden/report/rankings.csv"));

    const CliResult js = run_cli(
        "report --log data/golden/results_traceability.jsonl --format json --out " +
        out.string());
    CHECK(js.exit_code == 0);
    const auto j = json::parse(read_file(out / "summary.json"));
    CHECK(j.at("tasks").count("traceability") == 1);
    CHECK(j.at("note").get<std::string>().find("only one task") != std::string::npos);
}

TEST_CASE("audit detects a corrupted log") {
    const auto out = unique_temp_dir("cli_audit");
    std::string log = read_file("data/golden/results_classification.jsonl");
    // flip one tp count in the middle of the log
    const std::size_t pos = log.find("\"confusion\":{\"fn\":");
    REQUIRE(pos != std::string::npos);
    const std::size_t tp = log.find("\"tp\":", pos);
    REQUIRE(tp != std::string::npos);
    log.insert(tp + 5, "9");
    testsupport::write_file(out / "bad.jsonl", log);
    const CliResult audit = run_cli("audit --log " + (out / "bad.jsonl").string());
    CHECK(audit.exit_code == 2);
    CHECK(audit.output.find("mismatches") != std::string::npos);
}
