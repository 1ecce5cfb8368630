#include "lmphnn/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace lmphnn {

std::size_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::trace() const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < classes.size(); ++i) t += at(i, i);
    return t;
}

ConfusionMatrix confusion_matrix_ids(std::span<const std::size_t> truth,
                                     std::span<const std::size_t> predicted,
                                     std::span<const std::string> classes) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("confusion_matrix: label sequences differ in length");
    ConfusionMatrix m;
    m.classes.assign(classes.begin(), classes.end());
    m.counts.assign(classes.size() * classes.size(), 0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= classes.size() || predicted[i] >= classes.size())
            throw std::invalid_argument("confusion_matrix: label id out of range");
        ++m.counts[truth[i] * classes.size() + predicted[i]];
    }
    return m;
}

ConfusionMatrix confusion_matrix(std::span<const std::string> truth,
                                 std::span<const std::string> predicted,
                                 std::span<const std::string> classes) {
    std::unordered_map<std::string, std::size_t> id;
    for (std::size_t i = 0; i < classes.size(); ++i) id[classes[i]] = i;
    auto to_ids = [&](std::span<const std::string> labels) {
        std::vector<std::size_t> out;
        out.reserve(labels.size());
        for (const auto& l : labels) {
            auto it = id.find(l);
            if (it == id.end())
                throw std::invalid_argument("confusion_matrix: unknown label '" + l + "'");
            out.push_back(it->second);
        }
        return out;
    };
    auto t = to_ids(truth);
    auto p = to_ids(predicted);
    return confusion_matrix_ids(t, p, classes);
}

MetricsReport macro_metrics(const ConfusionMatrix& m) {
    std::size_t total = m.total();
    if (total == 0) throw std::invalid_argument("macro_metrics: empty confusion matrix");
    std::size_t M = m.classes.size();

    MetricsReport report;
    report.n_test = total;
    report.accuracy = static_cast<double>(m.trace()) / static_cast<double>(total);
    report.per_class.resize(M);
    for (std::size_t c = 0; c < M; ++c) {
        std::size_t tp = m.at(c, c);
        std::size_t fp = 0, fn = 0;
        for (std::size_t o = 0; o < M; ++o) {
            if (o == c) continue;
            fp += m.at(o, c);
            fn += m.at(c, o);
        }
        ClassMetrics& cm = report.per_class[c];
        cm.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
        cm.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
        cm.f1 = cm.precision + cm.recall == 0.0
                    ? 0.0
                    : 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall);
        report.precision += cm.precision;
        report.recall += cm.recall;
        report.f1 += cm.f1;
    }
    report.precision /= static_cast<double>(M);
    report.recall /= static_cast<double>(M);
    report.f1 /= static_cast<double>(M);
    return report;
}

double k_sensitivity(std::span<const double> series) {
    if (series.size() < 2)
        throw std::invalid_argument("k_sensitivity: series needs at least 2 values");
    // a constant series has zero spread exactly, no accumulation drift
    if (std::all_of(series.begin(), series.end(), [&](double v) { return v == series[0]; }))
        return 0.0;
    double mean = std::accumulate(series.begin(), series.end(), 0.0) /
                  static_cast<double>(series.size());
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    return std::sqrt(var / static_cast<double>(series.size()));
}

std::vector<std::size_t> predict_all(const FittedModel& model, ClassifierKind kind,
                                     const Dataset& test, std::size_t k,
                                     ExecutionPolicy policy) {
    std::vector<std::size_t> out(test.samples.size());
    const bool parallel = policy == ExecutionPolicy::Parallel;
    const auto n = static_cast<std::ptrdiff_t>(test.samples.size());
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = predict_class(model, kind, test.samples[i].features, k);
    return out;
}

const SweepRecord& SweepResult::record_for(ClassifierKind kind, std::size_t k) const {
    for (const auto& r : records)
        if (r.kind == kind && r.k == k) return r;
    throw std::invalid_argument("SweepResult: no record for " + std::string(to_string(kind)) +
                                " k=" + std::to_string(k));
}

SweepResult run_sweep(const Dataset& train, const Dataset& test,
                      std::span<const ClassifierKind> kinds,
                      std::span<const std::size_t> k_values, std::uint64_t seed,
                      ExecutionPolicy policy) {
    if (train.dim != test.dim || train.classes != test.classes)
        throw std::invalid_argument("run_sweep: train/test schema mismatch");
    if (test.samples.empty()) throw std::invalid_argument("run_sweep: empty test set");
    if (k_values.empty()) throw std::invalid_argument("run_sweep: empty k range");
    if (kinds.empty()) throw std::invalid_argument("run_sweep: no classifier kinds");

    std::unordered_map<std::string, std::size_t> class_id;
    for (std::size_t i = 0; i < test.classes.size(); ++i) class_id[test.classes[i]] = i;
    std::vector<std::size_t> truth;
    truth.reserve(test.samples.size());
    for (const auto& s : test.samples) truth.push_back(class_id.at(s.label));

    FittedModel model = fit(train);

    SweepResult result;
    result.dataset = train.name;
    result.seed = seed;
    result.k_values.assign(k_values.begin(), k_values.end());
    result.kinds.assign(kinds.begin(), kinds.end());
    result.records.reserve(kinds.size() * k_values.size());

    for (ClassifierKind kind : kinds) {
        for (std::size_t k : k_values) {
            auto t0 = std::chrono::steady_clock::now();
            std::vector<std::size_t> predicted = predict_all(model, kind, test, k, policy);
            auto t1 = std::chrono::steady_clock::now();

            SweepRecord rec;
            rec.kind = kind;
            rec.k = k;
            rec.metrics = macro_metrics(confusion_matrix_ids(truth, predicted, test.classes));
            rec.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

}  // namespace lmphnn
