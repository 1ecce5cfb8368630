// Benchmark CLI: bench / sensitivity / inspect subcommands over CSV datasets.
#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "lmphnn/harness.hpp"

namespace {

struct CliOptions {
    std::vector<std::string> data;
    std::string label_col = "last";
    std::string encode = "ordinal";
    std::string normalize = "none";
    double ratio = 0.5;
    std::string seeds;  // count or comma list; empty -> 9 seeds from base
    std::uint64_t seed_base = 1;
    std::string k_range = "2..10";
    std::string kinds = "all";
    std::string out_dir = "out";
    std::string format = "csv";
    bool timing = false;
    bool serial = false;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--data", opt.data, "Dataset CSV file(s)")->required()->expected(-1);
    cmd->add_option("--label-col", opt.label_col, "Label column: index, name or 'last'");
    cmd->add_option("--encode", opt.encode, "Categorical encoding")
        ->check(CLI::IsMember({"ordinal", "onehot"}));
    cmd->add_option("--normalize", opt.normalize, "Feature scaling, fitted on train only")
        ->check(CLI::IsMember({"none", "zscore", "minmax"}));
    cmd->add_option("--ratio", opt.ratio, "Train fraction of the stratified split");
    cmd->add_option("--seeds", opt.seeds, "Seed count, or explicit comma-separated seeds");
    cmd->add_option("--seed-base", opt.seed_base, "First seed when --seeds is a count")
        ->envname("LMPHNN_SEED");
    cmd->add_option("--k", opt.k_range, "Neighborhood sizes, 'a..b' or a single value");
    cmd->add_option("--kinds", opt.kinds, "Comma list of classifier kinds, or 'all'");
    cmd->add_option("--out", opt.out_dir, "Output directory");
    cmd->add_option("--format", opt.format, "Table formats: csv, md or csv,md");
    cmd->add_flag("--timing", opt.timing,
                  "Record wall-clock runtime_ms in raw.csv (breaks byte-for-byte "
                  "reproducibility of that column)");
    cmd->add_flag("--serial", opt.serial, "Disable OpenMP parallel prediction");
}

lmphnn::ExperimentConfig to_config(const CliOptions& opt) {
    lmphnn::ExperimentConfig config;
    config.data_paths = opt.data;
    config.label_column = opt.label_col;
    config.encoding = opt.encode == "onehot" ? lmphnn::EncodingPolicy::OneHot
                                             : lmphnn::EncodingPolicy::Ordinal;
    if (opt.normalize == "zscore") config.normalization = lmphnn::NormalizeMethod::ZScore;
    else if (opt.normalize == "minmax") config.normalization = lmphnn::NormalizeMethod::MinMax;
    config.ratio = opt.ratio;
    config.seed_base = opt.seed_base;
    if (!opt.seeds.empty())
        config.seeds = lmphnn::detail::parse_seed_spec(opt.seeds, opt.seed_base);
    auto [k_min, k_max] = lmphnn::detail::parse_k_range(opt.k_range);
    config.k_min = k_min;
    config.k_max = k_max;
    config.kinds = lmphnn::detail::parse_kind_list(opt.kinds);
    config.out_dir = opt.out_dir;
    config.format_csv = opt.format.find("csv") != std::string::npos;
    config.format_md = opt.format.find("md") != std::string::npos;
    config.timing = opt.timing;
    config.policy = opt.serial ? lmphnn::ExecutionPolicy::Serial
                               : lmphnn::ExecutionPolicy::Parallel;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nearest-neighbor classification benchmark (KNN family incl. LMPHNN)"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file (flags win)");

    CliOptions opt;
    CLI::App* bench = app.add_subcommand(
        "bench", "Run the classifier sweep and write raw/summary/curve reports");
    add_common_options(bench, opt);
    CLI::App* sens = app.add_subcommand(
        "sensitivity", "Std deviation of each metric over the k sweep, per classifier");
    add_common_options(sens, opt);

    std::string inspect_path;
    std::string inspect_label = "last";
    std::string inspect_encode = "ordinal";
    CLI::App* inspect = app.add_subcommand("inspect", "Summarize one dataset file");
    inspect->add_option("--data", inspect_path, "Dataset CSV file")->required();
    inspect->add_option("--label-col", inspect_label, "Label column: index, name or 'last'");
    inspect->add_option("--encode", inspect_encode, "Categorical encoding")
        ->check(CLI::IsMember({"ordinal", "onehot"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (inspect->parsed()) {
            return lmphnn::cmd_inspect(inspect_path, lmphnn::LabelColumn::parse(inspect_label),
                                       inspect_encode == "onehot"
                                           ? lmphnn::EncodingPolicy::OneHot
                                           : lmphnn::EncodingPolicy::Ordinal);
        }
        lmphnn::ExperimentConfig config = to_config(opt);
        if (bench->parsed()) return lmphnn::cmd_bench(config);
        return lmphnn::cmd_sensitivity(config);
    } catch (const lmphnn::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
