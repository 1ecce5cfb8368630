#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lmphnn/geometry.hpp"
#include "reference_rules.hpp"

using namespace lmphnn;

namespace {

struct Owned {
    std::vector<std::vector<double>> storage;
    std::vector<SampleView> views;
    void add(std::vector<double> v) { storage.push_back(std::move(v)); }
    std::span<const SampleView> span() {
        views.clear();
        for (std::size_t i = 0; i < storage.size(); ++i)
            views.push_back({std::span<const double>(storage[i]), i});
        return views;
    }
};

}  // namespace

TEST_CASE("euclidean basics") {
    std::vector<double> a{0.0, 0.0}, b{3.0, 4.0};
    CHECK(euclidean(a, b) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(euclidean(a, a) == 0.0);
    std::vector<double> c{1.0, 1.0, 1.0}, d{2.0, 3.0, 4.0};
    CHECK(euclidean(c, d) == doctest::Approx(std::sqrt(14.0)).epsilon(1e-15));
    CHECK(euclidean(b, a) == euclidean(a, b));
    CHECK_THROWS_AS(euclidean(a, c), std::invalid_argument);
}

TEST_CASE("k_nearest_in_class ordering, clamping, tie-break") {
    Owned cls;
    cls.add({5.0});
    cls.add({1.0});
    cls.add({3.0});
    std::vector<double> q{0.0};

    auto two = k_nearest_in_class(q, cls.span(), 2);
    REQUIRE(two.k_eff() == 2);
    CHECK(two.entries[0].sample.index == 1);
    CHECK(two.entries[0].distance == doctest::Approx(1.0));
    CHECK(two.entries[1].sample.index == 2);
    CHECK(two.entries[1].distance == doctest::Approx(3.0));

    auto clamped = k_nearest_in_class(q, cls.span(), 10);
    CHECK(clamped.k_eff() == 3);

    // indices 0 and 2 equidistant from the query: lower index first
    Owned tie;
    tie.add({2.0});
    tie.add({9.0});
    tie.add({-2.0});
    auto t = k_nearest_in_class(q, tie.span(), 2);
    CHECK(t.entries[0].sample.index == 0);
    CHECK(t.entries[1].sample.index == 2);

    CHECK_THROWS_AS(k_nearest_in_class(q, std::span<const SampleView>{}, 1),
                    std::invalid_argument);
}

TEST_CASE("k_nearest_in_class agrees with a full-sort brute force") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> feat(0.0, 2.0);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 1 + rng() % 100;
        std::size_t d = 1 + rng() % 5;
        Owned cls;
        std::vector<std::vector<double>> X;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> v(d);
            for (double& x : v) x = feat(rng);
            X.push_back(v);
            cls.add(std::move(v));
        }
        std::vector<double> q(d);
        for (double& x : q) x = feat(rng);
        std::size_t k = 1 + rng() % (n + 2);

        std::vector<std::size_t> everyone(n);
        for (std::size_t i = 0; i < n; ++i) everyone[i] = i;
        auto expect = reference::sorted_by_distance(q, X, everyone);
        expect.resize(std::min(k, n));

        auto got = k_nearest_in_class(q, cls.span(), k);
        REQUIRE(got.k_eff() == expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i) {
            CHECK(got.entries[i].sample.index == expect[i].index);
            CHECK(got.entries[i].distance == doctest::Approx(expect[i].d).epsilon(1e-12));
        }
    }
}

TEST_CASE("cumulative_local_means running average and distances") {
    Owned cls;
    cls.add({2.0});
    cls.add({4.0});
    cls.add({6.0});
    std::vector<double> q{0.0};
    auto nn = k_nearest_in_class(q, cls.span(), 3);
    auto seq = cumulative_local_means(nn, q);
    REQUIRE(seq.means.size() == 3);
    CHECK(seq.means[0][0] == doctest::Approx(2.0));
    CHECK(seq.means[1][0] == doctest::Approx(3.0));
    CHECK(seq.means[2][0] == doctest::Approx(4.0));

    // single neighbor: the first mean is that neighbor exactly
    auto one = k_nearest_in_class(q, cls.span(), 1);
    auto seq1 = cumulative_local_means(one, q);
    REQUIRE(seq1.means.size() == 1);
    CHECK(seq1.means[0][0] == 2.0);

    Owned pts;
    pts.add({1.0, 1.0});
    pts.add({3.0, 3.0});
    std::vector<double> origin{0.0, 0.0};
    auto nn2 = k_nearest_in_class(origin, pts.span(), 2);
    auto seq2 = cumulative_local_means(nn2, origin);
    CHECK(seq2.distances_to_query[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(seq2.distances_to_query[1] == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("cumulative mean recurrence holds on random inputs") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> feat(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t n = 2 + rng() % 12;
        std::size_t d = 1 + rng() % 4;
        Owned cls;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> v(d);
            for (double& x : v) x = feat(rng);
            cls.add(std::move(v));
        }
        std::vector<double> q(d);
        for (double& x : q) x = feat(rng);
        auto nn = k_nearest_in_class(q, cls.span(), n);
        auto seq = cumulative_local_means(nn, q);

        for (std::size_t t = 0; t < d; ++t)
            CHECK(seq.means[0][t] == doctest::Approx(nn.entries[0].sample.features[t]));
        for (std::size_t j = 2; j <= n; ++j) {
            for (std::size_t t = 0; t < d; ++t) {
                double expect = (static_cast<double>(j - 1) * seq.means[j - 2][t] +
                                 nn.entries[j - 1].sample.features[t]) /
                                static_cast<double>(j);
                CHECK(seq.means[j - 1][t] == doctest::Approx(expect).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("harmonic mean distance identities") {
    std::vector<double> equal{2.5, 2.5, 2.5};
    CHECK(harmonic_mean_from_distances(equal) == doctest::Approx(2.5).epsilon(1e-15));

    std::vector<double> two{1.0, 2.0};
    CHECK(harmonic_mean_from_distances(two) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

    std::vector<double> with_zero{1.0, 0.0, 3.0};
    CHECK(harmonic_mean_from_distances(with_zero) == 0.0);

    CHECK_THROWS_AS(harmonic_mean_from_distances({}), std::invalid_argument);

    // vector form: one reference vector coinciding with the query
    std::vector<std::vector<double>> vecs = {{1.0, 0.0}, {0.0, 0.0}};
    std::vector<double> q{0.0, 0.0};
    CHECK(harmonic_mean_distance(q, vecs) == 0.0);
}

TEST_CASE("harmonic mean lies between min and max") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> pos(1e-6, 50.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 1 + rng() % 10;
        std::vector<double> d(n);
        for (double& v : d) v = pos(rng);
        double h = harmonic_mean_from_distances(d);
        double lo = *std::min_element(d.begin(), d.end());
        double hi = *std::max_element(d.begin(), d.end());
        CHECK(h >= lo - 1e-12 * lo);
        CHECK(h <= hi + 1e-12 * hi);
    }
}

TEST_CASE("distances scale linearly with the features") {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> feat(0.0, 1.0);
    for (double c : {1e-3, 7.0, 1e3}) {
        std::size_t d = 3;
        Owned base, scaled;
        for (int i = 0; i < 6; ++i) {
            std::vector<double> v(d), vs(d);
            for (std::size_t t = 0; t < d; ++t) {
                v[t] = feat(rng);
                vs[t] = v[t] * c;
            }
            base.add(std::move(v));
            scaled.add(std::move(vs));
        }
        std::vector<double> q(d), qs(d);
        for (std::size_t t = 0; t < d; ++t) {
            q[t] = feat(rng);
            qs[t] = q[t] * c;
        }

        CHECK(euclidean(qs, scaled.span()[0].features) ==
              doctest::Approx(c * euclidean(q, base.span()[0].features)).epsilon(1e-12));

        auto nn = k_nearest_in_class(q, base.span(), 4);
        auto nns = k_nearest_in_class(qs, scaled.span(), 4);
        auto seq = cumulative_local_means(nn, q);
        auto seqs = cumulative_local_means(nns, qs);
        for (std::size_t j = 0; j < seq.distances_to_query.size(); ++j)
            CHECK(seqs.distances_to_query[j] ==
                  doctest::Approx(c * seq.distances_to_query[j]).epsilon(1e-12));

        CHECK(harmonic_mean_from_distances(seqs.distances_to_query) ==
              doctest::Approx(c * harmonic_mean_from_distances(seq.distances_to_query))
                  .epsilon(1e-12));
    }
}

TEST_CASE("nearest_centroid_neighbors basics") {
    // k=1 equals the nearest neighbor
    Owned cls;
    cls.add({4.0});
    cls.add({-1.0});
    cls.add({2.0});
    std::vector<double> q{0.0};
    auto one = nearest_centroid_neighbors(q, cls.span(), 1);
    auto nn = k_nearest_in_class(q, cls.span(), 1);
    REQUIRE(one.k_eff() == 1);
    CHECK(one.entries[0].sample.index == nn.entries[0].sample.index);

    // {-1, +5, +1}: second pick balances the centroid (0 beats 2)
    Owned spread;
    spread.add({-1.0});
    spread.add({5.0});
    spread.add({1.0});
    auto two = nearest_centroid_neighbors(q, spread.span(), 2);
    REQUIRE(two.k_eff() == 2);
    CHECK(two.entries[0].sample.index == 0);
    CHECK(two.entries[1].sample.index == 2);

    CHECK_THROWS_AS(nearest_centroid_neighbors(q, std::span<const SampleView>{}, 1),
                    std::invalid_argument);
}

TEST_CASE("nearest_centroid_neighbors matches the exhaustive greedy oracle") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> feat(0.0, 2.0);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 2 + rng() % 7;  // <= 8 samples
        std::size_t d = 1 + rng() % 3;
        Owned cls;
        std::vector<std::vector<double>> X;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> v(d);
            for (double& x : v) x = feat(rng);
            X.push_back(v);
            cls.add(std::move(v));
        }
        std::vector<double> q(d);
        for (double& x : q) x = feat(rng);
        std::size_t k = 1 + rng() % n;

        std::vector<std::size_t> everyone(n);
        for (std::size_t i = 0; i < n; ++i) everyone[i] = i;
        auto expect = reference::ncn_select(q, X, everyone, k);

        auto got = nearest_centroid_neighbors(q, cls.span(), k);
        REQUIRE(got.k_eff() == expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i) {
            CHECK(got.entries[i].sample.index == expect[i].index);
            CHECK(got.entries[i].distance == doctest::Approx(expect[i].d).epsilon(1e-12));
        }
    }
}

TEST_CASE("neighbor lists are nondecreasing in distance") {
    std::mt19937_64 rng(37);
    std::normal_distribution<double> feat(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 2 + rng() % 20;
        Owned cls;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> v(2);
            for (double& x : v) x = feat(rng);
            cls.add(std::move(v));
        }
        std::vector<double> q{feat(rng), feat(rng)};
        for (auto list : {k_nearest_in_class(q, cls.span(), n),
                          nearest_centroid_neighbors(q, cls.span(), n)}) {
            for (std::size_t i = 1; i < list.entries.size(); ++i)
                CHECK(list.entries[i - 1].distance <= list.entries[i].distance);
            for (const auto& e : list.entries) {
                CHECK(e.distance >= 0.0);
                CHECK(std::isfinite(e.distance));
            }
        }
    }
}
