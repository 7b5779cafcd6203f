#include "ppbench/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>

namespace ppbench {

namespace {

using nlohmann::json;

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

// Paper-style percentage with one decimal place.
std::string pct(double v) {
    return fixed(v * 100.0, 1);
}

std::string temp_label(double t) {
    return json(t).dump();
}

struct RankKey {
    double mean_f;
    double f_stdev;
    double mean_precision;

    bool operator==(const RankKey&) const = default;
};

// Higher F wins; lower stdev wins; higher precision wins.
bool better(const RankKey& a, const RankKey& b) {
    if (a.mean_f != b.mean_f) return a.mean_f > b.mean_f;
    if (a.f_stdev != b.f_stdev) return a.f_stdev < b.f_stdev;
    return a.mean_precision > b.mean_precision;
}

PatternRanking rank_from_keys(RankScope scope,
                              const std::map<PromptPattern, RankKey>& keys) {
    // Stable sort from catalog order so full-key ties fall back to it.
    std::vector<PromptPattern> order;
    for (PromptPattern p : all_patterns()) {
        if (keys.count(p)) order.push_back(p);
    }
    std::stable_sort(order.begin(), order.end(), [&](PromptPattern a, PromptPattern b) {
        return better(keys.at(a), keys.at(b));
    });
    PatternRanking ranking;
    ranking.scope = scope;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const RankKey& k = keys.at(order[i]);
        RankingEntry e;
        e.rank = static_cast<int>(i) + 1;
        e.pattern = order[i];
        e.mean_f = k.mean_f;
        e.f_stdev = k.f_stdev;
        e.mean_precision = k.mean_precision;
        const bool tie_prev = i > 0 && keys.at(order[i - 1]) == k;
        const bool tie_next = i + 1 < order.size() && keys.at(order[i + 1]) == k;
        e.tied = tie_prev || tie_next;
        ranking.entries.push_back(e);
    }
    return ranking;
}

const PatternRow* find_row(const TaskTable& table, PromptPattern p) {
    for (const PatternRow& row : table.rows) {
        if (row.pattern == p) return &row;
    }
    return nullptr;
}

std::string task_title(TaskKind t) {
    return t == TaskKind::BinaryClassification ? "Binary requirements classification"
                                               : "Requirements traceability";
}

void emit_markdown_task(std::string& out, const TaskTable& table) {
    out += "## " + task_title(table.task) + "\n\n";
    out += "Performance measures (percent), one value per temperature (";
    for (std::size_t i = 0; i < table.temperatures.size(); ++i) {
        if (i) out += " / ";
        out += temp_label(table.temperatures[i]);
    }
    out += ").\n\n";
    out += "| Prompt Pattern | Precision | Recall | F-Score | Accuracy |\n";
    out += "|---|---|---|---|---|\n";
    for (const PatternRow& row : table.rows) {
        out += "| " + pattern_display(row.pattern) + " |";
        for (int metric = 0; metric < 4; ++metric) {
            out += " ";
            for (std::size_t i = 0; i < table.temperatures.size(); ++i) {
                if (i) out += " / ";
                const auto it = row.stats.per_temperature_mean.find(table.temperatures[i]);
                if (it == row.stats.per_temperature_mean.end()) {
                    out += "—";
                    continue;
                }
                const MetricSet& m = it->second;
                const double v = metric == 0   ? m.precision
                                 : metric == 1 ? m.recall
                                 : metric == 2 ? m.f_score
                                               : m.accuracy;
                out += pct(v);
            }
            out += " |";
        }
        out += "\n";
    }
    out += "\n";
    out += "Standard deviation of performance measures across the temperature settings "
           "(percentage points).\n\n";
    out += "| Prompt Pattern | P-STDEV | R-STDEV | F-STDEV | A-STDEV |\n";
    out += "|---|---|---|---|---|\n";
    for (const PatternRow& row : table.rows) {
        const MetricStdev& s = row.stats.cross_temperature_stdev;
        out += "| " + pattern_display(row.pattern) + " | " + pct(s.precision) + " | " +
               pct(s.recall) + " | " + pct(s.f_score) + " | " + pct(s.accuracy) + " |";
        if (row.stats.single_temperature) out += " (degenerate: single temperature)";
        out += "\n";
    }
    out += "\n";

    std::vector<std::string> notes;
    if (table.failed_runs > 0) {
        notes.push_back(std::to_string(table.failed_runs) +
                        " failed run(s) excluded from aggregation");
    }
    int degenerate = 0;
    int parse_empty = 0;
    bool incomplete = false;
    for (const PatternRow& row : table.rows) {
        degenerate += row.degenerate_runs;
        parse_empty += row.parse_empty_runs;
        incomplete = incomplete || !row.complete;
    }
    if (degenerate > 0) {
        notes.push_back(std::to_string(degenerate) +
                        " run(s) had a zero-denominator metric (reported as 0)");
    }
    if (parse_empty > 0) {
        notes.push_back(std::to_string(parse_empty) +
                        " run(s) yielded no parseable labels (scored as all-F)");
    }
    if (incomplete) {
        notes.push_back("missing cells are marked \"—\"; stdev over present temperatures only");
    }
    if (!notes.empty()) {
        out += "Notes:\n";
        for (const std::string& n : notes) out += "- " + n + "\n";
        out += "\n";
    }
}

json stdev_to_json(const MetricStdev& s) {
    return json{{"precision", s.precision},
                {"recall", s.recall},
                {"f_score", s.f_score},
                {"accuracy", s.accuracy}};
}

} // namespace

std::string to_string(RankScope s) {
    switch (s) {
    case RankScope::BinaryClassification: return "classification";
    case RankScope::Traceability: return "traceability";
    case RankScope::Overall: return "overall";
    }
    return "unknown";
}

TaskTable build_metric_tables(const std::vector<RunRecord>& records,
                              const std::vector<double>& grid_temps, TaskKind task) {
    TaskTable table;
    table.task = task;
    table.temperatures = grid_temps;
    for (PromptPattern p : all_patterns()) {
        std::vector<std::pair<double, MetricSet>> runs;
        int degenerate = 0;
        int parse_empty = 0;
        for (const RunRecord& r : records) {
            if (r.task != task || r.pattern != p) continue;
            if (r.status != RunStatus::Ok) {
                ++table.failed_runs;
                continue;
            }
            if (!r.metrics) continue;
            runs.emplace_back(r.temperature, *r.metrics);
            if (!r.metrics->degenerate_flags.empty()) ++degenerate;
            if (r.cls_prediction && r.cls_prediction->parse_empty) ++parse_empty;
        }
        if (runs.empty()) continue;
        PatternRow row;
        row.pattern = p;
        row.stats = aggregate(runs, grid_temps);
        row.run_count = static_cast<int>(runs.size());
        row.degenerate_runs = degenerate;
        row.parse_empty_runs = parse_empty;
        row.complete = row.stats.per_temperature_mean.size() == grid_temps.size();
        double sp = 0, sr = 0, sf = 0, sa = 0;
        for (const auto& [t, m] : row.stats.per_temperature_mean) {
            sp += m.precision;
            sr += m.recall;
            sf += m.f_score;
            sa += m.accuracy;
        }
        const double n = static_cast<double>(row.stats.per_temperature_mean.size());
        row.mean_precision = sp / n;
        row.mean_recall = sr / n;
        row.mean_f = sf / n;
        row.mean_accuracy = sa / n;
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<PatternRanking> rank_patterns(const std::map<TaskKind, TaskTable>& tables) {
    for (const auto& [task, table] : tables) {
        if (table.rows.size() != static_cast<std::size_t>(kPatternCount)) {
            throw Error("incomplete tables: " + to_string(task) + " covers " +
                        std::to_string(table.rows.size()) + " of 5 patterns");
        }
        for (const PatternRow& row : table.rows) {
            if (!row.complete) {
                throw Error("incomplete tables: " + pattern_display(row.pattern) + " in " +
                            to_string(task) + " is missing a temperature cell");
            }
        }
    }

    std::vector<PatternRanking> rankings;
    std::map<TaskKind, std::map<PromptPattern, RankKey>> keys;
    for (const auto& [task, table] : tables) {
        for (const PatternRow& row : table.rows) {
            keys[task][row.pattern] =
                RankKey{row.mean_f, row.stats.cross_temperature_stdev.f_score, row.mean_precision};
        }
        rankings.push_back(rank_from_keys(task == TaskKind::BinaryClassification
                                              ? RankScope::BinaryClassification
                                              : RankScope::Traceability,
                                          keys[task]));
    }
    if (keys.count(TaskKind::BinaryClassification) && keys.count(TaskKind::Traceability)) {
        std::map<PromptPattern, RankKey> overall;
        for (PromptPattern p : all_patterns()) {
            const RankKey& a = keys[TaskKind::BinaryClassification][p];
            const RankKey& b = keys[TaskKind::Traceability][p];
            overall[p] = RankKey{(a.mean_f + b.mean_f) / 2.0, (a.f_stdev + b.f_stdev) / 2.0,
                                 (a.mean_precision + b.mean_precision) / 2.0};
        }
        rankings.push_back(rank_from_keys(RankScope::Overall, overall));
    }
    // Scope order: classification, traceability, overall.
    std::stable_sort(rankings.begin(), rankings.end(),
                     [](const PatternRanking& a, const PatternRanking& b) {
                         return static_cast<int>(a.scope) < static_cast<int>(b.scope);
                     });
    return rankings;
}

std::map<std::string, std::string> emit_report(const std::map<TaskKind, TaskTable>& tables,
                                               const std::vector<PatternRanking>& rankings,
                                               ReportFormat format,
                                               const std::string& ranking_note) {
    std::map<std::string, std::string> files;
    if (format == ReportFormat::Markdown) {
        std::string out = "# Prompt pattern evaluation report\n\n";
        out += "Ranking key: mean F-score over temperatures, ties broken by lower "
               "cross-temperature F-score standard deviation, then higher mean precision, "
               "then catalog order.\n\n";
        if (!ranking_note.empty()) out += ranking_note + "\n\n";
        for (const auto& [task, table] : tables) emit_markdown_task(out, table);
        if (!rankings.empty()) {
            out += "## Rank-based prompt pattern recommendation\n\n";
            out += "| Rank |";
            for (const PatternRanking& r : rankings) {
                out += " " + std::string(r.scope == RankScope::BinaryClassification
                                             ? "Binary Classification"
                                         : r.scope == RankScope::Traceability ? "Tracing"
                                                                              : "Overall") +
                       " |";
            }
            out += "\n|---|";
            for (std::size_t i = 0; i < rankings.size(); ++i) out += "---|";
            out += "\n";
            const std::size_t n = rankings.front().entries.size();
            for (std::size_t i = 0; i < n; ++i) {
                out += "| " + std::to_string(i + 1) + " |";
                for (const PatternRanking& r : rankings) {
                    out += " " + pattern_display(r.entries[i].pattern);
                    if (r.entries[i].tied) out += " (tied)";
                    out += " |";
                }
                out += "\n";
            }
            out += "\n";
        }
        files["report.md"] = out;
    } else if (format == ReportFormat::Csv) {
        for (const auto& [task, table] : tables) {
            std::string means = "pattern,temperature,precision,recall,f_score,accuracy,"
                                "precision_pct,recall_pct,f_score_pct,accuracy_pct\n";
            for (const PatternRow& row : table.rows) {
                for (double t : table.temperatures) {
                    const auto it = row.stats.per_temperature_mean.find(t);
                    means += pattern_key(row.pattern) + "," + temp_label(t) + ",";
                    if (it == row.stats.per_temperature_mean.end()) {
                        means += ",,,,,,,\n";
                        continue;
                    }
                    const MetricSet& m = it->second;
                    means += fixed(m.precision, 4) + "," + fixed(m.recall, 4) + "," +
                             fixed(m.f_score, 4) + "," + fixed(m.accuracy, 4) + "," +
                             pct(m.precision) + "," + pct(m.recall) + "," + pct(m.f_score) +
                             "," + pct(m.accuracy) + "\n";
                }
            }
            files["table_" + to_string(task) + ".csv"] = means;

            std::string stdev = "pattern,p_stdev,r_stdev,f_stdev,a_stdev\n";
            for (const PatternRow& row : table.rows) {
                const MetricStdev& s = row.stats.cross_temperature_stdev;
                stdev += pattern_key(row.pattern) + "," + fixed(s.precision, 4) + "," +
                         fixed(s.recall, 4) + "," + fixed(s.f_score, 4) + "," +
                         fixed(s.accuracy, 4) + "\n";
            }
            files["stdev_" + to_string(task) + ".csv"] = stdev;
        }
        if (!rankings.empty()) {
            std::string ranks = "rank";
            for (const PatternRanking& r : rankings) ranks += "," + to_string(r.scope);
            ranks += "\n";
            const std::size_t n = rankings.front().entries.size();
            for (std::size_t i = 0; i < n; ++i) {
                ranks += std::to_string(i + 1);
                for (const PatternRanking& r : rankings) {
                    ranks += "," + pattern_key(r.entries[i].pattern);
                }
                ranks += "\n";
            }
            files["rankings.csv"] = ranks;
        }
    } else {
        json j;
        json tasks = json::object();
        for (const auto& [task, table] : tables) {
            json patterns = json::object();
            for (const PatternRow& row : table.rows) {
                json temps = json::object();
                for (const auto& [t, m] : row.stats.per_temperature_mean) {
                    json flags = json::array();
                    for (MetricFlag f : m.degenerate_flags) flags.push_back(to_string(f));
                    temps[temp_label(t)] = {{"precision", m.precision},
                                            {"recall", m.recall},
                                            {"f_score", m.f_score},
                                            {"accuracy", m.accuracy},
                                            {"degenerate_flags", flags}};
                }
                patterns[pattern_key(row.pattern)] = {
                    {"temperatures", temps},
                    {"stdev", stdev_to_json(row.stats.cross_temperature_stdev)},
                    {"all_runs_stdev", stdev_to_json(row.stats.all_runs_stdev)},
                    {"mean_f", row.mean_f},
                    {"runs", row.run_count},
                    {"complete", row.complete}};
            }
            tasks[to_string(task)] = {{"patterns", patterns},
                                      {"failed_runs", table.failed_runs}};
        }
        j["tasks"] = tasks;
        json ranks = json::object();
        for (const PatternRanking& r : rankings) {
            json entries = json::array();
            for (const RankingEntry& e : r.entries) {
                entries.push_back({{"rank", e.rank},
                                   {"pattern", pattern_key(e.pattern)},
                                   {"mean_f", e.mean_f},
                                   {"f_stdev", e.f_stdev},
                                   {"mean_precision", e.mean_precision},
                                   {"tied", e.tied}});
            }
            ranks[to_string(r.scope)] = entries;
        }
        j["rankings"] = ranks;
        if (!ranking_note.empty()) j["note"] = ranking_note;
        files["summary.json"] = j.dump(2) + "\n";
    }
    return files;
}

} // namespace ppbench
