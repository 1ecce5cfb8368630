#include "lmphnn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lmphnn {

double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("euclidean: dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    double sum = 0.0;
    const double* pa = a.data();
    const double* pb = b.data();
    const std::size_t n = a.size();
#pragma omp simd reduction(+ : sum)
    for (std::size_t i = 0; i < n; ++i) {
        double diff = pa[i] - pb[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

NeighborList k_nearest_in_class(std::span<const double> query,
                                std::span<const SampleView> class_samples, std::size_t k) {
    if (class_samples.empty())
        throw std::invalid_argument("k_nearest_in_class: empty sample list");
    if (k == 0) throw std::invalid_argument("k_nearest_in_class: k must be >= 1");

    NeighborList list;
    list.entries.reserve(class_samples.size());
    for (const auto& s : class_samples)
        list.entries.push_back({s, euclidean(query, s.features)});

    auto by_distance = [](const Neighbor& a, const Neighbor& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.sample.index < b.sample.index;
    };
    std::size_t k_eff = std::min(k, list.entries.size());
    std::partial_sort(list.entries.begin(), list.entries.begin() + k_eff, list.entries.end(),
                      by_distance);
    list.entries.resize(k_eff);
    return list;
}

LocalMeanSequence cumulative_local_means(const NeighborList& neighbors,
                                         std::span<const double> query) {
    if (neighbors.entries.empty())
        throw std::invalid_argument("cumulative_local_means: empty neighbor list");

    LocalMeanSequence seq;
    seq.means.reserve(neighbors.entries.size());
    seq.distances_to_query.reserve(neighbors.entries.size());

    std::vector<double> running(query.size(), 0.0);
    for (std::size_t j = 1; j <= neighbors.entries.size(); ++j) {
        const auto& feat = neighbors.entries[j - 1].sample.features;
        if (feat.size() != running.size())
            throw std::invalid_argument("cumulative_local_means: dimension mismatch");
        for (std::size_t c = 0; c < running.size(); ++c) running[c] += feat[c];
        std::vector<double> mean(running.size());
        for (std::size_t c = 0; c < running.size(); ++c)
            mean[c] = running[c] / static_cast<double>(j);
        seq.distances_to_query.push_back(euclidean(query, mean));
        seq.means.push_back(std::move(mean));
    }
    return seq;
}

double harmonic_mean_from_distances(std::span<const double> distances) {
    if (distances.empty())
        throw std::invalid_argument("harmonic_mean_from_distances: empty input");
    double inv_sum = 0.0;
    for (double d : distances) {
        if (d <= 0.0) return 0.0;
        inv_sum += 1.0 / d;
    }
    return static_cast<double>(distances.size()) / inv_sum;
}

double harmonic_mean_distance(std::span<const double> query,
                              std::span<const std::vector<double>> vectors) {
    if (vectors.empty())
        throw std::invalid_argument("harmonic_mean_distance: empty vector list");
    std::vector<double> dists;
    dists.reserve(vectors.size());
    for (const auto& v : vectors) dists.push_back(euclidean(query, v));
    return harmonic_mean_from_distances(dists);
}

NeighborList nearest_centroid_neighbors(std::span<const double> query,
                                        std::span<const SampleView> samples, std::size_t k) {
    if (samples.empty())
        throw std::invalid_argument("nearest_centroid_neighbors: empty sample list");
    if (k == 0) throw std::invalid_argument("nearest_centroid_neighbors: k must be >= 1");

    std::size_t k_eff = std::min(k, samples.size());
    std::vector<bool> taken(samples.size(), false);
    std::vector<double> centroid_sum(query.size(), 0.0);
    std::vector<double> centroid(query.size());

    NeighborList list;
    list.entries.reserve(k_eff);
    for (std::size_t step = 1; step <= k_eff; ++step) {
        double best_dist = std::numeric_limits<double>::infinity();
        std::size_t best_pos = samples.size();
        for (std::size_t c = 0; c < samples.size(); ++c) {
            if (taken[c]) continue;
            const auto& feat = samples[c].features;
            if (feat.size() != centroid.size())
                throw std::invalid_argument("nearest_centroid_neighbors: dimension mismatch");
            for (std::size_t t = 0; t < centroid.size(); ++t)
                centroid[t] = (centroid_sum[t] + feat[t]) / static_cast<double>(step);
            double d = euclidean(query, centroid);
            bool better = d < best_dist ||
                          (d == best_dist && best_pos < samples.size() &&
                           samples[c].index < samples[best_pos].index);
            if (better) {
                best_dist = d;
                best_pos = c;
            }
        }
        taken[best_pos] = true;
        const auto& chosen = samples[best_pos];
        for (std::size_t t = 0; t < centroid.size(); ++t) centroid_sum[t] += chosen.features[t];
        list.entries.push_back({chosen, euclidean(query, chosen.features)});
    }

    std::sort(list.entries.begin(), list.entries.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.sample.index < b.sample.index;
    });
    return list;
}

}  // namespace lmphnn
