#include "ppbench/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace ppbench {

namespace {

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

// Population standard deviation (divide by n). A constant series is
// exactly zero; the mean of n equal doubles may not round back to them.
double pop_stdev(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const bool constant =
        std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); });
    if (constant) return 0.0;
    const double m = mean_of(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

} // namespace

std::string to_string(MetricFlag f) {
    switch (f) {
    case MetricFlag::PrecisionUndefined: return "precision_undefined";
    case MetricFlag::RecallUndefined: return "recall_undefined";
    case MetricFlag::FUndefined: return "f_undefined";
    }
    return "unknown";
}

ConfusionCounts score_classification(const ClassificationPrediction& pred,
                                     const std::map<std::string, ReqClass>& truth) {
    ConfusionCounts c;
    auto tally = [&](const std::string& id, ReqClass predicted) {
        const auto it = truth.find(id);
        if (it == truth.end()) {
            throw Error("score_classification: id \"" + id + "\" missing from ground truth");
        }
        const bool pred_nf = predicted == ReqClass::NF;
        const bool true_nf = it->second == ReqClass::NF;
        if (pred_nf && true_nf) ++c.tp;
        else if (pred_nf && !true_nf) ++c.fp;
        else if (!pred_nf && true_nf) ++c.fn;
        else ++c.tn;
    };
    for (const auto& [id, predicted] : pred.labels) tally(id, predicted);
    for (const std::string& id : pred.unparsed_ids) tally(id, ReqClass::F);
    return c;
}

ConfusionCounts score_trace(const TracePrediction& pred, const std::set<std::string>& truth_links,
                            const std::set<std::string>& universe) {
    for (const std::string& id : truth_links) {
        if (!universe.count(id)) {
            throw Error("score_trace: truth link \"" + id + "\" outside the candidate universe");
        }
    }
    ConfusionCounts c;
    for (const std::string& id : pred.linked_ids) {
        if (!universe.count(id)) {
            throw Error("score_trace: predicted id \"" + id + "\" outside the candidate universe");
        }
        if (truth_links.count(id)) ++c.tp;
        else ++c.fp;
    }
    for (const std::string& id : truth_links) {
        if (!pred.linked_ids.count(id)) ++c.fn;
    }
    c.tn = static_cast<long long>(universe.size()) - c.tp - c.fp - c.fn;
    return c;
}

MetricSet compute_metrics(const ConfusionCounts& c) {
    if (c.tp < 0 || c.fp < 0 || c.fn < 0 || c.tn < 0) {
        throw std::invalid_argument("compute_metrics: negative count");
    }
    if (c.total() == 0) {
        throw std::invalid_argument("compute_metrics: all counts are zero");
    }
    MetricSet m;
    if (c.tp + c.fp > 0) {
        m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    } else {
        m.degenerate_flags.insert(MetricFlag::PrecisionUndefined);
    }
    if (c.tp + c.fn > 0) {
        m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    } else {
        m.degenerate_flags.insert(MetricFlag::RecallUndefined);
    }
    if (m.precision + m.recall > 0.0) {
        m.f_score = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
        m.degenerate_flags.insert(MetricFlag::FUndefined);
    }
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    return m;
}

AggregateStats aggregate(const std::vector<std::pair<double, MetricSet>>& runs,
                         const std::vector<double>& grid) {
    if (runs.empty()) {
        throw std::invalid_argument("aggregate: empty run group");
    }
    AggregateStats stats;
    std::vector<double> mp, mr, mf, ma;          // per-temperature means
    std::vector<double> ap, ar, af, aa;          // every run, ungrouped
    for (double temp : grid) {
        std::vector<double> p, r, f, a;
        std::set<MetricFlag> flags;
        for (const auto& [t, m] : runs) {
            if (t != temp) continue;
            p.push_back(m.precision);
            r.push_back(m.recall);
            f.push_back(m.f_score);
            a.push_back(m.accuracy);
            flags.insert(m.degenerate_flags.begin(), m.degenerate_flags.end());
        }
        if (p.empty()) continue; // missing cell; the report layer flags it
        MetricSet mean;
        mean.precision = mean_of(p);
        mean.recall = mean_of(r);
        mean.f_score = mean_of(f);
        mean.accuracy = mean_of(a);
        mean.degenerate_flags = flags;
        stats.per_temperature_mean.emplace(temp, std::move(mean));
        mp.push_back(mean_of(p));
        mr.push_back(mean_of(r));
        mf.push_back(mean_of(f));
        ma.push_back(mean_of(a));
    }
    for (const auto& [t, m] : runs) {
        ap.push_back(m.precision);
        ar.push_back(m.recall);
        af.push_back(m.f_score);
        aa.push_back(m.accuracy);
    }
    stats.cross_temperature_stdev =
        MetricStdev{pop_stdev(mp), pop_stdev(mr), pop_stdev(mf), pop_stdev(ma)};
    stats.all_runs_stdev = MetricStdev{pop_stdev(ap), pop_stdev(ar), pop_stdev(af), pop_stdev(aa)};
    stats.single_temperature = stats.per_temperature_mean.size() < 2;
    return stats;
}

} // namespace ppbench
