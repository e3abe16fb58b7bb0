#pragma once

#include <cstdint>

namespace phantom {

/// Worker count for parallel kernels: min(OpenMP max threads,
/// PHANTOM_BUDGET_THREADS when set). Always at least 1.
int thread_budget();

/// splitmix64 step; used to derive independent per-task seeds from a
/// master seed so parallel runs are reproducible at any thread count.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for subtask `index` of stream `stream` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index);

}  // namespace phantom
