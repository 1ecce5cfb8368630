#include "lmphnn/harness.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace fs = std::filesystem;

namespace lmphnn {

namespace {

constexpr std::array<const char*, 4> kMetricNames = {"accuracy", "precision", "recall", "f1"};

double metric_value(const MetricsReport& m, std::size_t metric_id) {
    switch (metric_id) {
        case 0: return m.accuracy;
        case 1: return m.precision;
        case 2: return m.recall;
        default: return m.f1;
    }
}

// Write-to-temp-then-rename so a failed run leaves no partial files.
void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out.is_open()) throw DataError("cannot write '" + path.string() + "'");
        out << content;
        if (!out) throw DataError("write failed for '" + path.string() + "'");
    }
    fs::rename(tmp, path);
}

std::string dataset_display_name(const std::string& path) {
    fs::path p(path);
    std::string stem = p.stem().string();
    return stem.empty() ? path : stem;
}

struct Aggregate {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    double mean() const { return n == 0 ? 0.0 : sum / static_cast<double>(n); }
    double pop_std() const {
        if (n == 0) return 0.0;
        double m = mean();
        double var = sum_sq / static_cast<double>(n) - m * m;
        return var <= 0.0 ? 0.0 : std::sqrt(var);
    }
};

std::vector<std::string> ordered_datasets(const ExperimentConfig& config) {
    std::vector<std::string> names;
    for (const auto& p : config.data_paths) {
        std::string name = dataset_display_name(p);
        if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    }
    return names;
}

void write_summary_tables(const ExperimentConfig& config, const std::vector<RawRow>& rows,
                          const fs::path& out_dir) {
    auto kinds = config.resolved_kinds();
    auto datasets = ordered_datasets(config);

    for (std::size_t metric = 0; metric < kMetricNames.size(); ++metric) {
        // dataset x kind -> mean over seeds and k
        std::map<std::pair<std::string, ClassifierKind>, Aggregate> cells;
        for (const auto& row : rows)
            cells[{row.dataset, row.kind}].add(metric_value(row.metrics, metric));

        if (config.format_csv) {
            std::ostringstream csv;
            csv << "dataset";
            for (auto kind : kinds) csv << "," << to_string(kind);
            csv << "\n";
            for (const auto& ds : datasets) {
                csv << ds;
                for (auto kind : kinds)
                    csv << "," << detail::format_fixed4(cells[{ds, kind}].mean());
                csv << "\n";
            }
            write_file_atomic(out_dir / ("summary_" + std::string(kMetricNames[metric]) + ".csv"),
                              csv.str());
        }
    }

    if (config.format_md) {
        std::ostringstream md;
        md << "# Benchmark summary\n\n";
        md << "Mean over " << config.resolved_seeds().size() << " seed(s) and k in ["
           << config.k_min << ", " << config.k_max << "], split ratio " << config.ratio
           << ", encoding " << to_string(config.encoding) << ", normalization "
           << to_string(config.normalization) << ".\n";
        for (std::size_t metric = 0; metric < kMetricNames.size(); ++metric) {
            std::map<std::pair<std::string, ClassifierKind>, Aggregate> cells;
            for (const auto& row : rows)
                cells[{row.dataset, row.kind}].add(metric_value(row.metrics, metric));
            std::string title(kMetricNames[metric]);
            title[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(title[0])));
            md << "\n## " << title << "\n\n| Dataset |";
            for (auto kind : kinds) md << " " << to_string(kind) << " |";
            md << "\n|---|";
            for (std::size_t i = 0; i < kinds.size(); ++i) md << "---|";
            md << "\n";
            for (const auto& ds : datasets) {
                md << "| " << ds << " |";
                for (auto kind : kinds)
                    md << " " << detail::format_fixed4(cells[{ds, kind}].mean()) << " |";
                md << "\n";
            }
        }
        write_file_atomic(out_dir / "summary.md", md.str());
    }
}

void write_curves(const ExperimentConfig& config, const std::vector<RawRow>& rows,
                  const fs::path& out_dir) {
    auto kinds = config.resolved_kinds();
    auto ks = config.k_values();
    for (const auto& ds : ordered_datasets(config)) {
        std::ostringstream csv;
        csv << "kind,metric,k,mean,std\n";
        for (auto kind : kinds) {
            for (std::size_t metric = 0; metric < kMetricNames.size(); ++metric) {
                for (std::size_t k : ks) {
                    Aggregate agg;
                    for (const auto& row : rows)
                        if (row.dataset == ds && row.kind == kind && row.k == k)
                            agg.add(metric_value(row.metrics, metric));
                    csv << to_string(kind) << "," << kMetricNames[metric] << "," << k << ","
                        << detail::format_full(agg.mean()) << ","
                        << detail::format_full(agg.pop_std()) << "\n";
                }
            }
        }
        write_file_atomic(out_dir / ("curves_" + ds + ".csv"), csv.str());
    }
}

void write_raw_csv(const ExperimentConfig& config, const std::vector<RawRow>& rows,
                   const fs::path& out_dir) {
    std::ostringstream csv;
    csv << "dataset,kind,k,seed,accuracy,precision,recall,f1,n_test,runtime_ms\n";
    for (const auto& row : rows) {
        csv << row.dataset << "," << to_string(row.kind) << "," << row.k << "," << row.seed << ","
            << detail::format_full(row.metrics.accuracy) << ","
            << detail::format_full(row.metrics.precision) << ","
            << detail::format_full(row.metrics.recall) << ","
            << detail::format_full(row.metrics.f1) << "," << row.metrics.n_test << ",";
        if (config.timing) csv << detail::format_full(row.runtime_ms);
        csv << "\n";
    }
    write_file_atomic(out_dir / "raw.csv", csv.str());
}

}  // namespace

std::vector<std::uint64_t> ExperimentConfig::resolved_seeds() const {
    if (!seeds.empty()) return seeds;
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < 9; ++i) out.push_back(seed_base + i);
    return out;
}

std::vector<ClassifierKind> ExperimentConfig::resolved_kinds() const {
    if (!kinds.empty()) return kinds;
    return {kAllClassifierKinds.begin(), kAllClassifierKinds.end()};
}

std::vector<std::size_t> ExperimentConfig::k_values() const {
    std::vector<std::size_t> ks;
    for (std::size_t k = k_min; k <= k_max; ++k) ks.push_back(k);
    return ks;
}

void ExperimentConfig::validate() const {
    if (data_paths.empty()) throw std::invalid_argument("no dataset files given (--data)");
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("--ratio must be in (0,1)");
    if (k_min < 1 || k_max > 50 || k_min > k_max)
        throw std::invalid_argument("--k range must lie within [1,50] and be nonempty");
    if (resolved_seeds().empty()) throw std::invalid_argument("at least one seed required");
    if (resolved_kinds().empty()) throw std::invalid_argument("at least one classifier kind required");
    if (!format_csv && !format_md)
        throw std::invalid_argument("at least one output format required (--format csv,md)");
}

std::vector<RawRow> run_experiments(const ExperimentConfig& config, std::ostream& diag) {
    config.validate();
    auto seeds = config.resolved_seeds();
    auto kinds = config.resolved_kinds();
    auto ks = config.k_values();

    std::vector<RawRow> rows;
    for (const auto& path : config.data_paths) {
        LoadResult loaded =
            load_csv(path, LabelColumn::parse(config.label_column), config.encoding);
        Dataset& ds = loaded.dataset;
        diag << "[" << ds.name << "] N=" << ds.size() << " d=" << ds.dim
             << " classes=" << ds.classes.size() << " dropped=" << loaded.dropped_rows << "\n";

        bool warned_clamp = false, warned_constant = false;
        for (std::uint64_t seed : seeds) {
            SplitPair split = stratified_split(ds, config.ratio, seed);
            Dataset train = std::move(split.train);
            Dataset test = std::move(split.test);
            auto counts = train.class_counts();
            std::size_t smallest = *std::min_element(counts.begin(), counts.end());
            if (config.k_max > smallest && !warned_clamp) {
                diag << "[" << ds.name << "] note: k up to " << config.k_max
                     << " clamps to the smallest training class (" << smallest << " samples)\n";
                warned_clamp = true;
            }
            if (config.normalization != NormalizeMethod::None) {
                auto [train_norm, params] = normalize(train, config.normalization);
                std::size_t constant =
                    std::count(params.scale.begin(), params.scale.end(), 0.0);
                if (constant > 0 && !warned_constant) {
                    diag << "[" << ds.name << "] warning: " << constant
                         << " constant feature(s) pass through unnormalized\n";
                    warned_constant = true;
                }
                train = std::move(train_norm);
                test = apply_normalization(test, params);
            }
            SweepResult sweep = run_sweep(train, test, kinds, ks, seed, config.policy);
            for (const auto& rec : sweep.records)
                rows.push_back({ds.name, rec.kind, rec.k, seed, rec.metrics, rec.runtime_ms});
        }
    }
    return rows;
}

int cmd_bench(const ExperimentConfig& config, std::ostream& diag) {
    try {
        std::vector<RawRow> rows = run_experiments(config, diag);
        fs::path out_dir(config.out_dir);
        fs::create_directories(out_dir);
        write_raw_csv(config, rows, out_dir);
        write_summary_tables(config, rows, out_dir);
        write_curves(config, rows, out_dir);
        return 0;
    } catch (const DataError& e) {
        diag << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        diag << "usage error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_sensitivity(const ExperimentConfig& config, std::ostream& diag) {
    try {
        if (config.k_values().size() < 2)
            throw std::invalid_argument("sensitivity needs a k range of length >= 2");
        std::vector<RawRow> rows = run_experiments(config, diag);
        fs::path out_dir(config.out_dir);
        fs::create_directories(out_dir);

        auto kinds = config.resolved_kinds();
        auto seeds = config.resolved_seeds();
        auto ks = config.k_values();
        auto datasets = ordered_datasets(config);

        // sigma over the k series, one value per (dataset, kind, metric, seed)
        std::ostringstream raw;
        raw << "dataset,kind,metric,seed,sigma\n";
        std::map<std::tuple<std::string, ClassifierKind, std::size_t>, Aggregate> mean_sigma;
        for (const auto& ds : datasets) {
            for (auto kind : kinds) {
                for (std::size_t metric = 0; metric < kMetricNames.size(); ++metric) {
                    for (std::uint64_t seed : seeds) {
                        std::vector<double> series;
                        for (std::size_t k : ks)
                            for (const auto& row : rows)
                                if (row.dataset == ds && row.kind == kind && row.k == k &&
                                    row.seed == seed)
                                    series.push_back(metric_value(row.metrics, metric));
                        double sigma = k_sensitivity(series);
                        raw << ds << "," << to_string(kind) << "," << kMetricNames[metric] << ","
                            << seed << "," << detail::format_full(sigma) << "\n";
                        mean_sigma[{ds, kind, metric}].add(sigma);
                    }
                }
            }
        }
        write_file_atomic(out_dir / "sensitivity_raw.csv", raw.str());

        for (std::size_t metric = 0; metric < kMetricNames.size(); ++metric) {
            if (config.format_csv) {
                std::ostringstream csv;
                csv << "dataset";
                for (auto kind : kinds) csv << "," << to_string(kind);
                csv << "\n";
                for (const auto& ds : datasets) {
                    csv << ds;
                    for (auto kind : kinds)
                        csv << ","
                            << detail::format_fixed4(mean_sigma[{ds, kind, metric}].mean());
                    csv << "\n";
                }
                write_file_atomic(
                    out_dir / ("sensitivity_" + std::string(kMetricNames[metric]) + ".csv"),
                    csv.str());
            }
        }
        if (config.format_md) {
            std::ostringstream md;
            md << "# k-sensitivity (std of each metric over the k sweep, mean across seeds)\n";
            for (std::size_t metric = 0; metric < kMetricNames.size(); ++metric) {
                std::string title(kMetricNames[metric]);
                title[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(title[0])));
                md << "\n## " << title << "\n\n| Dataset |";
                for (auto kind : kinds) md << " " << to_string(kind) << " |";
                md << "\n|---|";
                for (std::size_t i = 0; i < kinds.size(); ++i) md << "---|";
                md << "\n";
                for (const auto& ds : datasets) {
                    md << "| " << ds << " |";
                    for (auto kind : kinds)
                        md << " " << detail::format_fixed4(mean_sigma[{ds, kind, metric}].mean())
                           << " |";
                    md << "\n";
                }
            }
            write_file_atomic(out_dir / "sensitivity.md", md.str());
        }
        return 0;
    } catch (const DataError& e) {
        diag << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        diag << "usage error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_inspect(const std::string& path, const LabelColumn& label, EncodingPolicy encoding,
                std::ostream& out, std::ostream& diag) {
    try {
        RawTable table = read_csv_raw(path, label);
        LoadResult loaded = encode_categoricals(table, encoding, label, dataset_display_name(path));
        const Dataset& ds = loaded.dataset;
        out << "N=" << ds.size() << " d=" << ds.dim << " classes=" << ds.classes.size() << "\n";
        out << "dropped_rows=" << loaded.dropped_rows << "\n";
        auto counts = ds.class_counts();
        for (std::size_t c = 0; c < ds.classes.size(); ++c)
            out << "class " << ds.classes[c] << ": " << counts[c] << "\n";
        if (loaded.categorical_columns.empty()) {
            out << "categorical columns: none\n";
        } else {
            out << "categorical columns:";
            for (std::size_t c : loaded.categorical_columns)
                out << " " << table.column_names[c];
            out << "\n";
        }
        return 0;
    } catch (const DataError& e) {
        diag << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        diag << "usage error: " << e.what() << "\n";
        return 1;
    }
}

namespace detail {

std::vector<std::uint64_t> parse_seed_spec(const std::string& spec, std::uint64_t base) {
    if (spec.empty()) throw std::invalid_argument("empty --seeds value");
    std::vector<std::uint64_t> out;
    if (spec.find(',') == std::string::npos) {
        std::uint64_t count = 0;
        auto [p, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), count);
        if (ec != std::errc() || p != spec.data() + spec.size() || count == 0)
            throw std::invalid_argument("--seeds expects a count or a comma list, got '" + spec +
                                        "'");
        for (std::uint64_t i = 0; i < count; ++i) out.push_back(base + i);
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size())
            throw std::invalid_argument("bad seed '" + tok + "' in --seeds");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty --seeds list");
    return out;
}

std::pair<std::size_t, std::size_t> parse_k_range(const std::string& spec) {
    auto parse_one = [](const std::string& s) {
        std::size_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw std::invalid_argument("bad k value '" + s + "'");
        return v;
    };
    auto dots = spec.find("..");
    if (dots == std::string::npos) {
        std::size_t k = parse_one(spec);
        return {k, k};
    }
    return {parse_one(spec.substr(0, dots)), parse_one(spec.substr(dots + 2))};
}

std::vector<ClassifierKind> parse_kind_list(const std::string& spec) {
    if (spec == "all" || spec.empty())
        return {kAllClassifierKinds.begin(), kAllClassifierKinds.end()};
    std::vector<ClassifierKind> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        auto kind = classifier_kind_from_string(tok);
        if (!kind) throw std::invalid_argument("unknown classifier kind '" + tok + "'");
        out.push_back(*kind);
    }
    if (out.empty()) throw std::invalid_argument("empty --kinds list");
    return out;
}

std::string format_full(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace detail

}  // namespace lmphnn
