#pragma once

#include <cstddef>
#include <functional>

namespace pccdr {

/// Worker count used by parallel loops. Defaults to PCCDR_THREADS or 1.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Number of fixed chunks a range of `n` items is split into. Independent of the
/// thread count, so per-chunk partial results merged in chunk order are
/// reproducible for any number of threads.
std::size_t chunk_count(std::size_t n);

/// Calls fn(chunk, begin, end) for every chunk of [0, n). Chunks run concurrently
/// when thread_count() > 1.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/// Convenience form: fn(i) for every i in [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace pccdr
