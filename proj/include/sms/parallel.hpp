#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sms::par {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Plain left-fold reference; kept for tests and the benchmark target.
template <class Term>
double serial_sum(std::size_t n, Term&& term) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += term(i);
    return s;
}

// Chunked sum: each fixed-size chunk is accumulated serially, chunk partials
// are folded in index order. The chunk grid does not depend on the thread
// count, so the result is bit-identical whether this runs on 1 or N threads —
// which is what lets reports stay byte-stable under OpenMP.
template <class Term>
double reduce_sum(std::size_t n, Term&& term, std::size_t chunk = 4096) {
    if (n == 0) return 0.0;
    if (chunk == 0) chunk = 1;
    const std::size_t nchunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nchunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * chunk;
        const std::size_t hi = std::min(lo + chunk, n);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(c)] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

// Index-parallel loop over independent tasks (replications). Results must be
// written to disjoint slots; aggregation happens afterwards in index order.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        body(static_cast<std::size_t>(i));
}

}  // namespace sms::par
