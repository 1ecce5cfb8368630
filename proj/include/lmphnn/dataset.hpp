#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lmphnn {

// Problems with the data itself (unreadable file, zero usable rows,
// degenerate class structure, ...). The CLI maps these to exit code 2;
// API contract violations use std::invalid_argument and map to exit code 1.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LabeledSample {
    std::vector<double> features;  // finite values only, length == Dataset::dim
    std::string label;
};

// Immutable after construction; safe to share across threads by const ref.
struct Dataset {
    std::string name;
    std::size_t dim = 0;
    std::vector<std::string> classes;  // distinct, first-appearance order
    std::vector<LabeledSample> samples;

    std::size_t size() const { return samples.size(); }

    // Sample counts per class, parallel to `classes`.
    std::vector<std::size_t> class_counts() const;

    // Throws DataError if any invariant is violated (dim mismatch, non-finite
    // feature, label outside `classes`, duplicate class names).
    void check_invariants() const;
};

// Cell grid of a CSV file before type detection and encoding.
struct RawTable {
    std::vector<std::string> column_names;  // synthesized c0..cN-1 when headerless
    bool had_header = false;
    std::vector<std::vector<std::string>> rows;  // uniform width == column_names.size()
    std::size_t dropped_rows = 0;                // ragged rows discarded while parsing
};

// Selects which CSV column holds the class label: the last column (default),
// a 0-based index, or a header name.
class LabelColumn {
public:
    static LabelColumn last() { return LabelColumn{}; }
    static LabelColumn index(std::size_t i);
    static LabelColumn name(std::string n);

    // "last", a nonnegative integer, or anything else as a header name.
    static LabelColumn parse(const std::string& text);

    // Throws DataError when the column cannot be resolved.
    std::size_t resolve(const RawTable& table) const;

    const std::string& spec() const { return spec_; }

private:
    enum class Kind { Last, Index, Name };
    Kind kind_ = Kind::Last;
    std::size_t index_ = 0;
    std::string spec_ = "last";
};

enum class EncodingPolicy { Ordinal, OneHot };
enum class NormalizeMethod { None, ZScore, MinMax };

const char* to_string(EncodingPolicy policy);
const char* to_string(NormalizeMethod method);

// Parses a CSV file into raw string cells. UTF-8, comma delimiter, minimal
// RFC 4180 quoting. Header presence is detected from the first row: it is a
// header iff any feature-column cell fails to parse as a number (the label
// column is excluded from the check). Rows whose width differs from the first
// row are dropped and counted.
RawTable read_csv_raw(const std::string& path, const LabelColumn& label = LabelColumn::last());

struct LoadResult {
    Dataset dataset;
    std::size_t dropped_rows = 0;                   // ragged + missing + non-finite
    std::vector<std::size_t> categorical_columns;   // raw column indices that were encoded
};

// Turns a raw table into a numeric Dataset. Column types are detected from
// the non-missing tokens: all numeric -> passthrough, none numeric ->
// categorical (encoded per policy), anything else -> DataError. Rows with a
// missing cell or a non-finite numeric value are dropped and counted.
// Ordinal encoding maps categories to 0,1,2,... in first-appearance order
// over the surviving rows; one-hot expands a column into one indicator
// column per category, in the same order, in place.
LoadResult encode_categoricals(const RawTable& table, EncodingPolicy policy,
                               const LabelColumn& label = LabelColumn::last(),
                               const std::string& dataset_name = "");

// read_csv_raw + encode_categoricals. Errors: empty file, zero usable rows,
// unresolvable label column, fewer than 2 classes, no feature columns.
LoadResult load_csv(const std::string& path, const LabelColumn& label = LabelColumn::last(),
                    EncodingPolicy policy = EncodingPolicy::Ordinal);

// Writes samples back out (header row, shortest round-trip float formatting),
// so that load_csv reproduces the dataset bit-exactly.
void write_csv(const Dataset& dataset, const std::string& path);

// Per-feature affine transform fitted on one dataset and reusable on another.
// scale == 0 marks a constant feature that passes through unchanged.
struct NormalizeParams {
    NormalizeMethod method = NormalizeMethod::None;
    std::vector<double> offset;  // mean (zscore) or min (minmax)
    std::vector<double> scale;   // population std (zscore) or max-min (minmax)

    std::vector<double> apply(std::span<const double> features) const;
};

// Fits the transform on `d` and returns the transformed copy plus the
// parameters. ZScore uses the population convention (divide by n). Constant
// features pass through unchanged. method == None is the identity.
std::pair<Dataset, NormalizeParams> normalize(const Dataset& d, NormalizeMethod method);

Dataset apply_normalization(const Dataset& d, const NormalizeParams& params);

struct SplitPair {
    Dataset train;
    Dataset test;
    std::uint64_t seed = 0;
    double ratio = 0.5;
    std::vector<std::size_t> train_indices;  // into the source dataset, ascending
    std::vector<std::size_t> test_indices;
};

// Seeded stratified split: within each class, max(1, floor(ratio*N_i)) samples
// go to train via a deterministic Fisher-Yates shuffle, the rest to test.
// Pure function of (dataset order, ratio, seed); the shuffle uses a local
// splitmix64 generator so the partition is identical across platforms.
// Throws std::invalid_argument for ratio outside (0,1) and DataError when a
// class has fewer than 2 samples.
SplitPair stratified_split(const Dataset& d, double ratio, std::uint64_t seed);

}  // namespace lmphnn
