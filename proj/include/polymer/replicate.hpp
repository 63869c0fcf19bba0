#pragma once
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polymer/rng.hpp"

namespace polymer {

struct ReplicateOptions {
  ReplicateOptions(int w = 0) : workers(w) {}  // NOLINT: implicit on purpose
  int workers = 0;              // 0 = hardware concurrency
  std::string checkpoint_dir;   // empty = no checkpointing
  std::size_t chunk = 16384;    // replicas per work unit / checkpoint file
};

// Calls fn(replica, rng, out) for replica = 0..n-1, where rng is the stream
// (seed, stream_id_for(tag, replica)) and out points at `width` doubles.
// Returns the n x width row-major table. Output is independent of the worker
// count. With a checkpoint dir, finished chunks are stored and reused.
using ReplicaFn = std::function<void(std::size_t, RngStream&, double*)>;
std::vector<double> replicate(std::size_t n, std::size_t width, std::uint64_t seed,
                              std::uint64_t tag, const ReplicaFn& fn,
                              const ReplicateOptions& opts = {});

// Column j of a row-major table.
std::vector<double> column(const std::vector<double>& table, std::size_t width, std::size_t j);

int resolve_workers(int requested);

}  // namespace polymer
