#pragma once

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "lmphnn/dataset.hpp"
#include "lmphnn/evaluation.hpp"

namespace lmphnn {

// Everything one benchmark invocation needs. Defaults follow the evaluation
// protocol: 1:1 stratified splits, nine seeds, k from 2 to 10, all eight
// rules.
struct ExperimentConfig {
    std::vector<std::string> data_paths;
    std::string label_column = "last";
    EncodingPolicy encoding = EncodingPolicy::Ordinal;
    NormalizeMethod normalization = NormalizeMethod::None;
    double ratio = 0.5;
    std::vector<std::uint64_t> seeds;  // empty -> seed_base .. seed_base+8
    std::uint64_t seed_base = 1;
    std::size_t k_min = 2;
    std::size_t k_max = 10;
    std::vector<ClassifierKind> kinds;  // empty -> all eight
    std::string out_dir = "out";
    bool format_csv = true;
    bool format_md = false;
    // Off by default so report files are byte-identical across runs; when on,
    // the raw CSV's runtime_ms column carries wall-clock measurements.
    bool timing = false;
    ExecutionPolicy policy = ExecutionPolicy::Parallel;

    std::vector<std::uint64_t> resolved_seeds() const;
    std::vector<ClassifierKind> resolved_kinds() const;
    std::vector<std::size_t> k_values() const;

    // Throws std::invalid_argument (usage error): k range within [1,50] and
    // nonempty, ratio in (0,1), at least one kind/seed/data path, at least
    // one output format.
    void validate() const;
};

// One raw result row: dataset x kind x k x seed.
struct RawRow {
    std::string dataset;
    ClassifierKind kind = ClassifierKind::KNN;
    std::size_t k = 1;
    std::uint64_t seed = 0;
    MetricsReport metrics;
    double runtime_ms = 0.0;
};

// Runs the full pipeline (load, split, normalize, sweep) for every dataset
// and seed in the config. Row order: datasets in config order, then seeds,
// then kinds, then k ascending.
std::vector<RawRow> run_experiments(const ExperimentConfig& config, std::ostream& diag);

// Benchmark command: writes raw.csv, per-metric summary tables (rows =
// datasets, columns = kinds, cells = mean over seeds and k) and per-dataset
// accuracy-vs-k curve files (kind, metric, k, mean, std over seeds).
// Returns 0 on success, 1 on a usage error, 2 on a data error; all files are
// written to a temp name and renamed so failures leave no partial files.
int cmd_bench(const ExperimentConfig& config, std::ostream& diag = std::cerr);

// k-sensitivity command: per (dataset, kind, metric, seed), the population
// standard deviation of the metric series over the k range. Writes
// sensitivity_raw.csv plus per-metric tables of the mean sigma over seeds.
int cmd_sensitivity(const ExperimentConfig& config, std::ostream& diag = std::cerr);

// Prints N, d, class histogram, dropped-row count and detected categorical
// columns for one file.
int cmd_inspect(const std::string& path, const LabelColumn& label, EncodingPolicy encoding,
                std::ostream& out = std::cout, std::ostream& diag = std::cerr);

namespace detail {
// "1,2,5" or a bare count n (meaning base, base+1, ..., base+n-1).
std::vector<std::uint64_t> parse_seed_spec(const std::string& spec, std::uint64_t base);
// "2..10" or a single value.
std::pair<std::size_t, std::size_t> parse_k_range(const std::string& spec);
// "all" or comma-separated kind names.
std::vector<ClassifierKind> parse_kind_list(const std::string& spec);
std::string format_full(double v);   // shortest round-trip
std::string format_fixed4(double v); // table cells
}  // namespace detail

}  // namespace lmphnn
