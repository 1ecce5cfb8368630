#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lmphnn/classifiers.hpp"
#include "lmphnn/dataset.hpp"

namespace lmphnn {

// rows = true class, columns = predicted class, order = `classes`.
struct ConfusionMatrix {
    std::vector<std::string> classes;
    std::vector<std::size_t> counts;  // M*M row-major

    std::size_t at(std::size_t true_id, std::size_t pred_id) const {
        return counts[true_id * classes.size() + pred_id];
    }
    std::size_t total() const;
    std::size_t trace() const;
};

ConfusionMatrix confusion_matrix(std::span<const std::string> truth,
                                 std::span<const std::string> predicted,
                                 std::span<const std::string> classes);
ConfusionMatrix confusion_matrix_ids(std::span<const std::size_t> truth,
                                     std::span<const std::size_t> predicted,
                                     std::span<const std::string> classes);

struct ClassMetrics {
    double precision = 0.0;  // TP/(TP+FP), 0 when the denominator is 0
    double recall = 0.0;     // TP/(TP+FN), 0 when the denominator is 0
    double f1 = 0.0;         // harmonic mean of the two, 0 when both are 0
};

struct MetricsReport {
    double accuracy = 0.0;
    double precision = 0.0;  // macro: unweighted mean over classes
    double recall = 0.0;
    double f1 = 0.0;
    std::vector<ClassMetrics> per_class;
    std::size_t n_test = 0;
};

// Throws std::invalid_argument on an empty matrix.
MetricsReport macro_metrics(const ConfusionMatrix& m);

// Population standard deviation of the series (divide by n, not n-1).
// Throws std::invalid_argument when the series has fewer than 2 values.
double k_sensitivity(std::span<const double> series);

enum class ExecutionPolicy { Serial, Parallel };

// Predicted class ids for every test sample. Parallel runs split queries
// across OpenMP threads; results are bit-identical to the serial path because
// each prediction is independent and lands in its own slot.
std::vector<std::size_t> predict_all(const FittedModel& model, ClassifierKind kind,
                                     const Dataset& test, std::size_t k,
                                     ExecutionPolicy policy = ExecutionPolicy::Parallel);

struct SweepRecord {
    ClassifierKind kind = ClassifierKind::KNN;
    std::size_t k = 1;
    MetricsReport metrics;
    double runtime_ms = 0.0;  // wall clock; not part of the determinism contract
};

struct SweepResult {
    std::string dataset;
    std::uint64_t seed = 0;
    std::vector<std::size_t> k_values;
    std::vector<ClassifierKind> kinds;
    std::vector<SweepRecord> records;  // every (kind, k), kinds outer, k inner

    const SweepRecord& record_for(ClassifierKind kind, std::size_t k) const;
};

// Evaluates every (kind, k) cell on the given train/test pair. Metrics are a
// pure function of the inputs; only runtime_ms varies between runs.
// Throws std::invalid_argument on schema mismatch, an empty test set, or an
// empty k range.
SweepResult run_sweep(const Dataset& train, const Dataset& test,
                      std::span<const ClassifierKind> kinds,
                      std::span<const std::size_t> k_values, std::uint64_t seed,
                      ExecutionPolicy policy = ExecutionPolicy::Parallel);

}  // namespace lmphnn
