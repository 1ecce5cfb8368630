#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmphnn/dataset.hpp"
#include "lmphnn/geometry.hpp"

namespace lmphnn {

// The eight rules. Report files use exactly these spellings.
enum class ClassifierKind { KNN, LMKNN, PNN, LMPNN, KNCN, LMKNCN, LMKHNN, LMPHNN };

constexpr std::array<ClassifierKind, 8> kAllClassifierKinds = {
    ClassifierKind::KNN,    ClassifierKind::LMKNN,  ClassifierKind::PNN,
    ClassifierKind::LMPNN,  ClassifierKind::KNCN,   ClassifierKind::LMKNCN,
    ClassifierKind::LMKHNN, ClassifierKind::LMPHNN};

std::string_view to_string(ClassifierKind kind);
std::optional<ClassifierKind> classifier_kind_from_string(std::string_view name);

// True for the majority-vote rules (KNN, KNCN); the rest are per-class
// pseudo-distance argmin rules.
bool is_vote_kind(ClassifierKind kind);

// Per-class partition of a training set. All rules are instance-based, so
// fitting is just the partition. Immutable and safe for concurrent predict
// calls; move-only because the per-class views alias internal storage.
class FittedModel {
public:
    // Throws DataError when train is empty or has fewer than 2 classes.
    explicit FittedModel(Dataset train);

    FittedModel(const FittedModel&) = delete;
    FittedModel& operator=(const FittedModel&) = delete;
    FittedModel(FittedModel&&) = default;
    FittedModel& operator=(FittedModel&&) = default;

    std::size_t dim() const { return train_.dim; }
    const std::vector<std::string>& classes() const { return train_.classes; }
    std::size_t num_classes() const { return train_.classes.size(); }
    std::size_t train_size() const { return train_.samples.size(); }

    // Samples of one class; view indices are positions in the training set.
    std::span<const SampleView> class_samples(std::size_t class_id) const {
        return per_class_[class_id];
    }
    // The whole training set in dataset order.
    std::span<const SampleView> all_samples() const { return all_; }
    std::size_t class_of(std::size_t sample_index) const { return label_ids_[sample_index]; }

private:
    Dataset train_;
    std::vector<std::size_t> label_ids_;             // per sample
    std::vector<std::vector<SampleView>> per_class_; // parallel to classes()
    std::vector<SampleView> all_;
};

FittedModel fit(Dataset train);

// Everything predict computed: the chosen class and the per-class scores.
// For argmin kinds, scores are the rule's pseudo-distances (smaller wins,
// ties to the earlier class). For vote kinds, scores are the vote counts
// (larger wins; ties go to the class whose nearest voting member is closer,
// then to the earlier class).
struct PredictionDetail {
    std::size_t class_id = 0;
    std::string label;
    std::vector<double> class_scores;
};

PredictionDetail predict_detail(const FittedModel& model, ClassifierKind kind,
                                std::span<const double> query, std::size_t k);

std::size_t predict_class(const FittedModel& model, ClassifierKind kind,
                          std::span<const double> query, std::size_t k);

std::string predict(const FittedModel& model, ClassifierKind kind,
                    std::span<const double> query, std::size_t k);

}  // namespace lmphnn
