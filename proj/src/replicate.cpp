#include "polymer/replicate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace polymer {

namespace fs = std::filesystem;

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {
std::string chunk_path(const std::string& dir, std::uint64_t seed, std::uint64_t tag,
                       std::size_t n, std::size_t width, std::size_t c) {
  std::ostringstream os;
  os << dir << "/ckpt_" << std::hex << seed << "_" << tag << std::dec << "_n" << n << "_w"
     << width << "_c" << c << ".bin";
  return os.str();
}

bool load_chunk(const std::string& path, double* dst, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  in.seekg(0, std::ios::end);
  if (static_cast<std::size_t>(in.tellg()) != count * sizeof(double)) return false;
  in.seekg(0);
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(count * sizeof(double)));
  return static_cast<bool>(in);
}

void store_chunk(const std::string& path, const double* src, std::size_t count) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out.write(reinterpret_cast<const char*>(src),
              static_cast<std::streamsize>(count * sizeof(double)));
  }
  fs::rename(tmp, path);
}
}  // namespace

std::vector<double> replicate(std::size_t n, std::size_t width, std::uint64_t seed,
                              std::uint64_t tag, const ReplicaFn& fn,
                              const ReplicateOptions& opts) {
  std::vector<double> out(n * width);
  const std::size_t chunk = std::max<std::size_t>(1, opts.chunk);
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  const bool ckpt = !opts.checkpoint_dir.empty();
  if (ckpt) fs::create_directories(opts.checkpoint_dir);

  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;

  auto work = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      std::size_t lo = c * chunk, hi = std::min(n, lo + chunk);
      double* dst = out.data() + lo * width;
      std::string path;
      if (ckpt) {
        path = chunk_path(opts.checkpoint_dir, seed, tag, n, width, c);
        if (load_chunk(path, dst, (hi - lo) * width)) continue;
      }
      try {
        for (std::size_t r = lo; r < hi; ++r) {
          RngStream rng(seed, stream_id_for(tag, r));
          fn(r, rng, out.data() + r * width);
        }
        if (ckpt) store_chunk(path, dst, (hi - lo) * width);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        next.store(n_chunks);
        return;
      }
    }
  };

  int workers = std::min<int>(resolve_workers(opts.workers), static_cast<int>(n_chunks));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
  return out;
}

std::vector<double> column(const std::vector<double>& table, std::size_t width, std::size_t j) {
  std::vector<double> col(table.size() / width);
  for (std::size_t r = 0; r < col.size(); ++r) col[r] = table[r * width + j];
  return col;
}

}  // namespace polymer
