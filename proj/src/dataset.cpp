#include "lmphnn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace lmphnn {

namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& token, double& out) {
    if (token.empty()) return false;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool is_numeric_token(const std::string& token) {
    double v;
    return parse_double(token, v);
}

// Splits one CSV record; double-quoted cells may contain commas and "" escapes.
std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"' && trim(cell).empty()) {
            quoted = true;
            cell.clear();
        } else if (c == ',') {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += '"';
    return out;
}

std::string path_stem(const std::string& path) {
    auto slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
    return base;
}

// splitmix64; fixed so split partitions are identical everywhere.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t bounded(std::uint64_t bound) { return next() % bound; }
};

void fisher_yates(std::vector<std::size_t>& v, SplitMix64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(classes.size(), 0);
    std::unordered_map<std::string, std::size_t> id;
    for (std::size_t i = 0; i < classes.size(); ++i) id[classes[i]] = i;
    for (const auto& s : samples) {
        auto it = id.find(s.label);
        if (it != id.end()) ++counts[it->second];
    }
    return counts;
}

void Dataset::check_invariants() const {
    if (classes.empty()) throw DataError("dataset has no classes");
    std::unordered_set<std::string> seen(classes.begin(), classes.end());
    if (seen.size() != classes.size()) throw DataError("duplicate class labels");
    for (const auto& s : samples) {
        if (s.features.size() != dim)
            throw DataError("sample dimension mismatch in dataset '" + name + "'");
        for (double v : s.features)
            if (!std::isfinite(v)) throw DataError("non-finite feature value");
        if (!seen.count(s.label)) throw DataError("sample label '" + s.label + "' not in class set");
    }
}

LabelColumn LabelColumn::index(std::size_t i) {
    LabelColumn c;
    c.kind_ = Kind::Index;
    c.index_ = i;
    c.spec_ = std::to_string(i);
    return c;
}

LabelColumn LabelColumn::name(std::string n) {
    LabelColumn c;
    c.kind_ = Kind::Name;
    c.spec_ = std::move(n);
    return c;
}

LabelColumn LabelColumn::parse(const std::string& text) {
    std::string t = trim(text);
    if (t.empty() || t == "last") return last();
    if (!t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); }))
        return index(std::stoul(t));
    return name(t);
}

std::size_t LabelColumn::resolve(const RawTable& table) const {
    std::size_t ncols = table.column_names.size();
    if (ncols == 0) throw DataError("label column missing: table has no columns");
    switch (kind_) {
        case Kind::Last:
            return ncols - 1;
        case Kind::Index:
            if (index_ >= ncols)
                throw DataError("label column missing: index " + spec_ + " out of range (" +
                                std::to_string(ncols) + " columns)");
            return index_;
        case Kind::Name: {
            if (!table.had_header)
                throw DataError("label column missing: '" + spec_ + "' needs a header row");
            auto it = std::find(table.column_names.begin(), table.column_names.end(), spec_);
            if (it == table.column_names.end())
                throw DataError("label column missing: no column named '" + spec_ + "'");
            return static_cast<std::size_t>(it - table.column_names.begin());
        }
    }
    throw DataError("label column missing");
}

RawTable read_csv_raw(const std::string& path, const LabelColumn& label) {
    std::ifstream file(path, std::ios::binary);
    if (!file.is_open()) throw DataError("cannot open file '" + path + "'");

    std::vector<std::vector<std::string>> records;
    std::string line;
    bool first = true;
    while (std::getline(file, line)) {
        if (first && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
            static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF)
            line.erase(0, 3);  // UTF-8 BOM
        first = false;
        if (trim(line).empty()) continue;
        records.push_back(split_cells(line));
    }
    if (records.empty()) throw DataError("empty file '" + path + "'");

    RawTable table;
    std::size_t ncols = records[0].size();
    table.column_names.resize(ncols);

    // Header iff any feature-column cell of the first row is non-numeric.
    std::size_t label_idx = ncols - 1;
    try {
        RawTable probe;
        probe.column_names.resize(ncols);
        label_idx = label.resolve(probe);
    } catch (const DataError&) {
        // name selectors are re-resolved against the real header below
    }
    bool header = false;
    for (std::size_t c = 0; c < ncols; ++c) {
        if (c == label_idx) continue;
        if (!is_numeric_token(records[0][c])) {
            header = true;
            break;
        }
    }

    std::size_t start = 0;
    if (header) {
        table.column_names = records[0];
        table.had_header = true;
        start = 1;
    } else {
        for (std::size_t c = 0; c < ncols; ++c) table.column_names[c] = "c" + std::to_string(c);
    }
    for (std::size_t r = start; r < records.size(); ++r) {
        if (records[r].size() != ncols) {
            ++table.dropped_rows;
            continue;
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

LoadResult encode_categoricals(const RawTable& table, EncodingPolicy policy,
                               const LabelColumn& label, const std::string& dataset_name) {
    std::size_t ncols = table.column_names.size();
    std::size_t label_idx = label.resolve(table);
    if (ncols < 2) throw DataError("no feature columns");

    enum class ColType { Numeric, Categorical, Unseen };
    std::vector<ColType> types(ncols, ColType::Unseen);
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < ncols; ++c) {
            if (c == label_idx || row[c].empty()) continue;
            ColType t = is_numeric_token(row[c]) ? ColType::Numeric : ColType::Categorical;
            if (types[c] == ColType::Unseen) {
                types[c] = t;
            } else if (types[c] != t) {
                throw DataError("column '" + table.column_names[c] +
                                "' mixes numeric and string tokens");
            }
        }
    }

    // Pass 1: survivors (no missing cell, no non-finite numeric value).
    std::vector<bool> keep(table.rows.size(), true);
    std::size_t dropped = table.dropped_rows;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = 0; c < ncols && keep[r]; ++c) {
            const std::string& cell = table.rows[r][c];
            if (cell.empty()) keep[r] = false;
            else if (c != label_idx && types[c] == ColType::Numeric) {
                double v;
                parse_double(cell, v);
                if (!std::isfinite(v)) keep[r] = false;
            }
        }
        if (!keep[r]) ++dropped;
    }

    // Pass 2: category maps in first-appearance order over surviving rows.
    std::vector<std::unordered_map<std::string, std::size_t>> cat_id(ncols);
    std::vector<std::vector<std::string>> cat_order(ncols);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (!keep[r]) continue;
        for (std::size_t c = 0; c < ncols; ++c) {
            if (c == label_idx || types[c] != ColType::Categorical) continue;
            const std::string& cell = table.rows[r][c];
            if (cat_id[c].emplace(cell, cat_order[c].size()).second) cat_order[c].push_back(cell);
        }
    }

    LoadResult result;
    result.dropped_rows = dropped;
    Dataset& d = result.dataset;
    d.name = dataset_name;

    std::size_t dim = 0;
    for (std::size_t c = 0; c < ncols; ++c) {
        if (c == label_idx) continue;
        if (types[c] == ColType::Categorical) {
            result.categorical_columns.push_back(c);
            dim += policy == EncodingPolicy::OneHot ? cat_order[c].size() : 1;
        } else {
            ++dim;  // numeric or all-missing column (passes through as-is)
        }
    }
    d.dim = dim;

    std::unordered_set<std::string> class_set;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (!keep[r]) continue;
        const auto& row = table.rows[r];
        LabeledSample s;
        s.features.reserve(dim);
        for (std::size_t c = 0; c < ncols; ++c) {
            if (c == label_idx) continue;
            if (types[c] == ColType::Categorical) {
                std::size_t id = cat_id[c].at(row[c]);
                if (policy == EncodingPolicy::OneHot) {
                    for (std::size_t v = 0; v < cat_order[c].size(); ++v)
                        s.features.push_back(v == id ? 1.0 : 0.0);
                } else {
                    s.features.push_back(static_cast<double>(id));
                }
            } else {
                double v = 0.0;
                parse_double(row[c], v);
                s.features.push_back(v);
            }
        }
        s.label = row[label_idx];
        if (class_set.insert(s.label).second) d.classes.push_back(s.label);
        d.samples.push_back(std::move(s));
    }

    if (d.samples.empty()) throw DataError("zero usable rows");
    if (d.classes.size() < 2)
        throw DataError("fewer than 2 classes (found " + std::to_string(d.classes.size()) + ")");
    return result;
}

LoadResult load_csv(const std::string& path, const LabelColumn& label, EncodingPolicy policy) {
    RawTable table = read_csv_raw(path, label);
    return encode_categoricals(table, policy, label, path_stem(path));
}

void write_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file.is_open()) throw DataError("cannot write file '" + path + "'");
    for (std::size_t c = 0; c < dataset.dim; ++c) file << "f" << c << ",";
    file << "label\n";
    for (const auto& s : dataset.samples) {
        for (double v : s.features) file << format_double(v) << ",";
        file << csv_escape(s.label) << "\n";
    }
    if (!file) throw DataError("write failed for '" + path + "'");
}

std::vector<double> NormalizeParams::apply(std::span<const double> features) const {
    std::vector<double> out(features.begin(), features.end());
    if (method == NormalizeMethod::None) return out;
    for (std::size_t c = 0; c < out.size() && c < scale.size(); ++c) {
        if (scale[c] == 0.0) continue;  // constant feature passes through
        out[c] = (out[c] - offset[c]) / scale[c];
    }
    return out;
}

std::pair<Dataset, NormalizeParams> normalize(const Dataset& d, NormalizeMethod method) {
    NormalizeParams params;
    params.method = method;
    if (method == NormalizeMethod::None || d.samples.empty())
        return {d, params};

    std::size_t n = d.samples.size();
    params.offset.assign(d.dim, 0.0);
    params.scale.assign(d.dim, 0.0);
    if (method == NormalizeMethod::ZScore) {
        for (const auto& s : d.samples)
            for (std::size_t c = 0; c < d.dim; ++c) params.offset[c] += s.features[c];
        for (std::size_t c = 0; c < d.dim; ++c) params.offset[c] /= static_cast<double>(n);
        for (const auto& s : d.samples)
            for (std::size_t c = 0; c < d.dim; ++c) {
                double diff = s.features[c] - params.offset[c];
                params.scale[c] += diff * diff;
            }
        for (std::size_t c = 0; c < d.dim; ++c)
            params.scale[c] = std::sqrt(params.scale[c] / static_cast<double>(n));
    } else {  // MinMax
        std::vector<double> lo(d.dim, std::numeric_limits<double>::infinity());
        std::vector<double> hi(d.dim, -std::numeric_limits<double>::infinity());
        for (const auto& s : d.samples)
            for (std::size_t c = 0; c < d.dim; ++c) {
                lo[c] = std::min(lo[c], s.features[c]);
                hi[c] = std::max(hi[c], s.features[c]);
            }
        for (std::size_t c = 0; c < d.dim; ++c) {
            params.offset[c] = lo[c];
            params.scale[c] = hi[c] - lo[c];
        }
    }
    return {apply_normalization(d, params), params};
}

Dataset apply_normalization(const Dataset& d, const NormalizeParams& params) {
    Dataset out = d;
    if (params.method == NormalizeMethod::None) return out;
    for (auto& s : out.samples) s.features = params.apply(s.features);
    return out;
}

SplitPair stratified_split(const Dataset& d, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("split ratio must be in (0,1)");

    std::unordered_map<std::string, std::size_t> class_id;
    for (std::size_t i = 0; i < d.classes.size(); ++i) class_id[d.classes[i]] = i;
    std::vector<std::vector<std::size_t>> by_class(d.classes.size());
    for (std::size_t i = 0; i < d.samples.size(); ++i)
        by_class[class_id.at(d.samples[i].label)].push_back(i);

    for (std::size_t c = 0; c < by_class.size(); ++c)
        if (by_class[c].size() < 2)
            throw DataError("class '" + d.classes[c] + "' has fewer than 2 samples (" +
                            std::to_string(by_class[c].size()) + ")");

    SplitPair split;
    split.seed = seed;
    split.ratio = ratio;
    SplitMix64 rng{seed};
    for (auto& idxs : by_class) {
        fisher_yates(idxs, rng);
        auto n_train = static_cast<std::size_t>(
            std::floor(ratio * static_cast<double>(idxs.size())));
        n_train = std::max<std::size_t>(1, n_train);
        split.train_indices.insert(split.train_indices.end(), idxs.begin(), idxs.begin() + n_train);
        split.test_indices.insert(split.test_indices.end(), idxs.begin() + n_train, idxs.end());
    }
    std::sort(split.train_indices.begin(), split.train_indices.end());
    std::sort(split.test_indices.begin(), split.test_indices.end());

    auto subset = [&](const std::vector<std::size_t>& idxs) {
        Dataset out;
        out.name = d.name;
        out.dim = d.dim;
        out.classes = d.classes;
        out.samples.reserve(idxs.size());
        for (std::size_t i : idxs) out.samples.push_back(d.samples[i]);
        return out;
    };
    split.train = subset(split.train_indices);
    split.test = subset(split.test_indices);
    return split;
}

const char* to_string(EncodingPolicy policy) {
    return policy == EncodingPolicy::Ordinal ? "ordinal" : "onehot";
}

const char* to_string(NormalizeMethod method) {
    switch (method) {
        case NormalizeMethod::ZScore: return "zscore";
        case NormalizeMethod::MinMax: return "minmax";
        default: return "none";
    }
}

}  // namespace lmphnn
