#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lmphnn {

// View of one training sample plus its dataset-order identity. `index` is the
// position in the original dataset and is the tie-break key everywhere.
struct SampleView {
    std::span<const double> features;
    std::size_t index = 0;
};

struct Neighbor {
    SampleView sample;
    double distance = 0.0;  // to the query
};

// Ascending by (distance, sample.index).
struct NeighborList {
    std::vector<Neighbor> entries;
    std::size_t k_eff() const { return entries.size(); }
};

// means[j-1] is the mean of the first j neighbors; means[0] equals the first
// neighbor exactly. distances_to_query[j-1] = euclidean(query, means[j-1]).
struct LocalMeanSequence {
    std::vector<std::vector<double>> means;
    std::vector<double> distances_to_query;
};

// sqrt(sum((a-b)^2)). Throws std::invalid_argument on dimension mismatch.
double euclidean(std::span<const double> a, std::span<const double> b);

// The min(k, |class_samples|) nearest samples, ascending by (distance, index).
// Throws std::invalid_argument when class_samples is empty or k == 0.
NeighborList k_nearest_in_class(std::span<const double> query,
                                std::span<const SampleView> class_samples, std::size_t k);

LocalMeanSequence cumulative_local_means(const NeighborList& neighbors,
                                         std::span<const double> query);

// j / sum(1/d_r) over the given distances. Returns 0 when any distance is 0
// (the limit value: a coincident reference vector dominates). Throws
// std::invalid_argument on an empty input.
double harmonic_mean_from_distances(std::span<const double> distances);

// Same, computing d_r = euclidean(query, vectors[r]) first.
double harmonic_mean_distance(std::span<const double> query,
                              std::span<const std::vector<double>> vectors);

// Greedy nearest-centroid-neighbor selection: the first pick is the nearest
// sample; each later pick minimizes the distance from the query to the
// centroid of the already-selected set plus the candidate. Ties go to the
// lower index. Recorded distances are sample-to-query; entries are re-sorted
// ascending by (distance, index) after selection.
NeighborList nearest_centroid_neighbors(std::span<const double> query,
                                        std::span<const SampleView> samples, std::size_t k);

}  // namespace lmphnn
