#ifndef TAILASYM_PARALLEL_HPP
#define TAILASYM_PARALLEL_HPP

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tailasym {

/// Execution policy for the chunked estimators.  Results are identical for
/// both settings; only wall time changes.
struct ExecPolicy {
    bool parallel = true;
};

// Runs fn(chunk_index) for every chunk.  Chunks write to disjoint slots, so
// the OpenMP path needs no synchronization; the serial path is the reference
// implementation the tests compare against.
template <class Fn>
void for_each_chunk(std::size_t n_chunks, const ExecPolicy& exec, Fn&& fn) {
#ifdef _OPENMP
    if (exec.parallel && n_chunks > 1) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c)
            fn(static_cast<std::size_t>(c));
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
}

}  // namespace tailasym

#endif
