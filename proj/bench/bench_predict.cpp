// Throughput benchmark: serial vs OpenMP prediction over a synthetic blob
// dataset, one row per classifier kind. Also prints the LMPHNN/LMPNN cost
// ratio as a sanity check on the per-query operation counts (the harmonic
// terms should add a small constant factor, not change the asymptotics).
//
//   bench_predict [n_train] [n_test] [dim] [k]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lmphnn/classifiers.hpp"
#include "lmphnn/evaluation.hpp"

using namespace lmphnn;

namespace {

Dataset make_blobs(std::size_t n, std::size_t dim, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    Dataset d;
    d.name = "bench";
    d.dim = dim;
    for (std::size_t c = 0; c < m; ++c) d.classes.push_back("c" + std::to_string(c));
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = i % m;
        LabeledSample s;
        s.label = d.classes[c];
        s.features.resize(dim);
        for (std::size_t t = 0; t < dim; ++t)
            s.features[t] = 4.0 * static_cast<double>(c) + noise(rng);
        d.samples.push_back(std::move(s));
    }
    return d;
}

double run_ms(const FittedModel& model, ClassifierKind kind, const Dataset& test, std::size_t k,
              ExecutionPolicy policy, std::vector<std::size_t>& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = predict_all(model, kind, test, k, policy);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n_train = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 3000;
    std::size_t n_test = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 1500;
    std::size_t dim = argc > 3 ? std::strtoul(argv[3], nullptr, 10) : 16;
    std::size_t k = argc > 4 ? std::strtoul(argv[4], nullptr, 10) : 7;

    Dataset all = make_blobs(n_train + n_test, dim, 4, 99);
    Dataset train = all;
    train.samples.assign(all.samples.begin(), all.samples.begin() + n_train);
    Dataset test = all;
    test.samples.assign(all.samples.begin() + n_train, all.samples.end());

    FittedModel model = fit(std::move(train));

#ifdef _OPENMP
    std::printf("n_train=%zu n_test=%zu d=%zu k=%zu threads=%d\n", n_train, n_test, dim, k,
                omp_get_max_threads());
#else
    std::printf("n_train=%zu n_test=%zu d=%zu k=%zu (no OpenMP)\n", n_train, n_test, dim, k);
#endif
    std::printf("%-8s %12s %12s %9s %9s\n", "kind", "serial_ms", "parallel_ms", "speedup",
                "us/query");

    double lmpnn_serial = 0.0, lmphnn_serial = 0.0;
    for (ClassifierKind kind : kAllClassifierKinds) {
        std::vector<std::size_t> serial_pred, parallel_pred;
        double serial = run_ms(model, kind, test, k, ExecutionPolicy::Serial, serial_pred);
        double parallel = run_ms(model, kind, test, k, ExecutionPolicy::Parallel, parallel_pred);
        if (serial_pred != parallel_pred) {
            std::fprintf(stderr, "FAIL: serial and parallel predictions differ for %s\n",
                         std::string(to_string(kind)).c_str());
            return 1;
        }
        if (kind == ClassifierKind::LMPNN) lmpnn_serial = serial;
        if (kind == ClassifierKind::LMPHNN) lmphnn_serial = serial;
        std::printf("%-8s %12.2f %12.2f %8.2fx %9.2f\n",
                    std::string(to_string(kind)).c_str(), serial, parallel, serial / parallel,
                    1000.0 * serial / static_cast<double>(n_test));
    }
    if (lmpnn_serial > 0.0)
        std::printf("\nLMPHNN/LMPNN serial cost ratio: %.2f (expected a small constant)\n",
                    lmphnn_serial / lmpnn_serial);
    return 0;
}
