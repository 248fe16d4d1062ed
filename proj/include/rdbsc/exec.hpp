#pragma once

#include <cstddef>

namespace rdbsc {

// Kernels take an ExecMode: `serial` is the reference path, `parallel` runs
// the same per-item work under OpenMP. Parallel loops only fill independent
// slots; reductions stay serial in index order, so both modes produce
// bit-identical results.
enum class ExecMode { serial, parallel };

template <typename Fn>
void for_each_index(std::size_t n, ExecMode exec, Fn&& fn) {
    if (exec == ExecMode::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long long i = 0; i < static_cast<long long>(n); ++i) fn(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) fn(i);
    }
}

}  // namespace rdbsc
