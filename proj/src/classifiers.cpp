#include "lmphnn/classifiers.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace lmphnn {

std::string_view to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::KNN: return "KNN";
        case ClassifierKind::LMKNN: return "LMKNN";
        case ClassifierKind::PNN: return "PNN";
        case ClassifierKind::LMPNN: return "LMPNN";
        case ClassifierKind::KNCN: return "KNCN";
        case ClassifierKind::LMKNCN: return "LMKNCN";
        case ClassifierKind::LMKHNN: return "LMKHNN";
        case ClassifierKind::LMPHNN: return "LMPHNN";
    }
    return "?";
}

std::optional<ClassifierKind> classifier_kind_from_string(std::string_view name) {
    for (ClassifierKind kind : kAllClassifierKinds)
        if (to_string(kind) == name) return kind;
    return std::nullopt;
}

bool is_vote_kind(ClassifierKind kind) {
    return kind == ClassifierKind::KNN || kind == ClassifierKind::KNCN;
}

FittedModel::FittedModel(Dataset train) : train_(std::move(train)) {
    if (train_.samples.empty()) throw DataError("cannot fit on an empty training set");
    if (train_.classes.size() < 2)
        throw DataError("cannot fit on a single-class training set");

    std::unordered_map<std::string, std::size_t> class_id;
    for (std::size_t i = 0; i < train_.classes.size(); ++i) class_id[train_.classes[i]] = i;

    label_ids_.reserve(train_.samples.size());
    per_class_.resize(train_.classes.size());
    all_.reserve(train_.samples.size());
    for (std::size_t i = 0; i < train_.samples.size(); ++i) {
        const auto& s = train_.samples[i];
        auto it = class_id.find(s.label);
        if (it == class_id.end())
            throw DataError("training label '" + s.label + "' not in class set");
        label_ids_.push_back(it->second);
        SampleView view{std::span<const double>(s.features), i};
        per_class_[it->second].push_back(view);
        all_.push_back(view);
    }
    for (std::size_t c = 0; c < per_class_.size(); ++c)
        if (per_class_[c].empty())
            throw DataError("class '" + train_.classes[c] + "' has no training samples");
}

FittedModel fit(Dataset train) { return FittedModel(std::move(train)); }

namespace {

// Sum over j of weight 1/j times the harmonic mean of the first j distances.
// Accumulating the reciprocal sum gives exactly harmonic_mean_from_distances
// on each prefix: the additions happen in the same order.
double lmphnn_score(std::span<const double> lmv_distances) {
    double inv_sum = 0.0;
    bool coincident = false;
    double score = 0.0;
    for (std::size_t j = 1; j <= lmv_distances.size(); ++j) {
        double d = lmv_distances[j - 1];
        if (!coincident) {
            if (d <= 0.0) coincident = true;
            else inv_sum += 1.0 / d;
        }
        double hmd = coincident ? 0.0 : static_cast<double>(j) / inv_sum;
        score += hmd / static_cast<double>(j);
    }
    return score;
}

double weighted_prefix_sum(std::span<const double> distances) {
    double score = 0.0;
    for (std::size_t j = 1; j <= distances.size(); ++j)
        score += distances[j - 1] / static_cast<double>(j);
    return score;
}

PredictionDetail vote_rule(const FittedModel& model, ClassifierKind kind,
                           std::span<const double> query, std::size_t k) {
    NeighborList neighbors = kind == ClassifierKind::KNN
                                 ? k_nearest_in_class(query, model.all_samples(), k)
                                 : nearest_centroid_neighbors(query, model.all_samples(), k);

    std::size_t m = model.num_classes();
    std::vector<double> votes(m, 0.0);
    std::vector<double> best_dist(m, std::numeric_limits<double>::infinity());
    for (const auto& n : neighbors.entries) {
        std::size_t c = model.class_of(n.sample.index);
        votes[c] += 1.0;
        best_dist[c] = std::min(best_dist[c], n.distance);
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < m; ++c) {
        if (votes[c] > votes[best] ||
            (votes[c] == votes[best] && best_dist[c] < best_dist[best]))
            best = c;
    }
    return {best, model.classes()[best], std::move(votes)};
}

double class_score(const FittedModel& model, ClassifierKind kind,
                   std::span<const double> query, std::size_t k, std::size_t class_id) {
    std::span<const SampleView> samples = model.class_samples(class_id);
    NeighborList neighbors = kind == ClassifierKind::LMKNCN
                                 ? nearest_centroid_neighbors(query, samples, k)
                                 : k_nearest_in_class(query, samples, k);

    switch (kind) {
        case ClassifierKind::PNN: {
            std::vector<double> dists;
            dists.reserve(neighbors.k_eff());
            for (const auto& n : neighbors.entries) dists.push_back(n.distance);
            return weighted_prefix_sum(dists);
        }
        case ClassifierKind::LMKNN:
        case ClassifierKind::LMKNCN: {
            // distance to the mean of all selected neighbors
            LocalMeanSequence lms = cumulative_local_means(neighbors, query);
            return lms.distances_to_query.back();
        }
        case ClassifierKind::LMPNN: {
            LocalMeanSequence lms = cumulative_local_means(neighbors, query);
            return weighted_prefix_sum(lms.distances_to_query);
        }
        case ClassifierKind::LMKHNN: {
            LocalMeanSequence lms = cumulative_local_means(neighbors, query);
            return harmonic_mean_from_distances(lms.distances_to_query);
        }
        case ClassifierKind::LMPHNN: {
            LocalMeanSequence lms = cumulative_local_means(neighbors, query);
            return lmphnn_score(lms.distances_to_query);
        }
        default:
            throw std::invalid_argument("class_score: not an argmin kind");
    }
}

}  // namespace

PredictionDetail predict_detail(const FittedModel& model, ClassifierKind kind,
                                std::span<const double> query, std::size_t k) {
    if (query.size() != model.dim())
        throw std::invalid_argument("predict: query dimension " + std::to_string(query.size()) +
                                    " does not match model dimension " +
                                    std::to_string(model.dim()));
    if (k == 0) throw std::invalid_argument("predict: k must be >= 1");

    if (is_vote_kind(kind)) return vote_rule(model, kind, query, k);

    std::size_t m = model.num_classes();
    std::vector<double> scores(m);
    for (std::size_t c = 0; c < m; ++c) scores[c] = class_score(model, kind, query, k, c);

    std::size_t best = 0;
    for (std::size_t c = 1; c < m; ++c)
        if (scores[c] < scores[best]) best = c;
    return {best, model.classes()[best], std::move(scores)};
}

std::size_t predict_class(const FittedModel& model, ClassifierKind kind,
                          std::span<const double> query, std::size_t k) {
    return predict_detail(model, kind, query, k).class_id;
}

std::string predict(const FittedModel& model, ClassifierKind kind,
                    std::span<const double> query, std::size_t k) {
    return predict_detail(model, kind, query, k).label;
}

}  // namespace lmphnn
