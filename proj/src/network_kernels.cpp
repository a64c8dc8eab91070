#include <stdexcept>
#include <vector>

#include "neusoc/network.hpp"

#ifdef NEUSOC_HAVE_OPENMP
#include <omp.h>
#endif

namespace neusoc {

namespace {

EvalResult tally(const Dataset& ds, const std::vector<int>& predicted) {
    EvalResult r;
    r.total = ds.size();
    for (std::size_t n = 0; n < ds.size(); ++n) {
        const int truth = ds.samples[n].label;
        const int pred = predicted[n];
        ++r.confusion[static_cast<std::size_t>(truth)][static_cast<std::size_t>(pred)];
        if (truth == pred) ++r.correct;
    }
    r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);
    return r;
}

}  // namespace

EvalResult evaluate_serial(const Network& net, const Dataset& ds) {
    if (ds.empty()) throw std::invalid_argument("evaluate: empty dataset");
    std::vector<int> predicted(ds.size());
    for (std::size_t n = 0; n < ds.size(); ++n)
        predicted[n] = net.classify(ds.samples[n].pixels, eval_stream(net.config().seed, n)).predicted;
    return tally(ds, predicted);
}

EvalResult evaluate(const Network& net, const Dataset& ds, int workers) {
    if (ds.empty()) throw std::invalid_argument("evaluate: empty dataset");
    std::vector<int> predicted(ds.size());
    const auto n_samples = static_cast<long>(ds.size());
    const auto seed = net.config().seed;
#ifdef NEUSOC_HAVE_OPENMP
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
#else
    (void)workers;
#endif
    for (long n = 0; n < n_samples; ++n) {
        const auto k = static_cast<std::size_t>(n);
        predicted[k] = net.classify(ds.samples[k].pixels, eval_stream(seed, k)).predicted;
    }
    return tally(ds, predicted);
}

}  // namespace neusoc
