// Copyright 2026 The graphfeyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "graphfeyn/errors.hpp"
#include "graphfeyn/rng.hpp"

namespace graphfeyn {

struct SamplerConfig {
  /// A path that would need more jumps than this before the horizon is
  /// flagged exploded and contributes zero.
  std::uint64_t max_jumps = 1u << 20;
  std::uint64_t seed = 0;
  /// Paths per RNG stream. Results depend on (seed, chunk_size), never on workers.
  std::uint64_t chunk_size = 4096;
  unsigned workers = 1;
#ifdef NDEBUG
  bool check_paths = false;
#else
  bool check_paths = true;
#endif

  void check() const {
    if (max_jumps < 1) throw InputError("max_jumps must be >= 1");
    if (chunk_size < 1) throw InputError("chunk_size must be >= 1");
    if (workers < 1) throw InputError("workers must be >= 1");
  }
};

/// Complex Monte Carlo mean with componentwise standard errors.
///
/// Exploded paths are part of n_samples and contribute zero.
struct MCEstimate {
  std::complex<double> mean{0.0, 0.0};
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t n_exploded = 0;

  double combined_stderr() const noexcept { return stderr_re + stderr_im; }

  /// |mean - reference| / (stderr_re + stderr_im); 0 or inf when both errors vanish.
  double z_score(std::complex<double> reference) const {
    const double dev = std::abs(mean - reference);
    const double se = combined_stderr();
    if (se > 0.0) return dev / se;
    return dev <= 1e-12 * std::max(1.0, std::abs(reference)) ? 0.0
                                                              : std::numeric_limits<double>::infinity();
  }
};

inline MCEstimate conj(const MCEstimate& e) {
  MCEstimate out = e;
  out.mean = std::conj(e.mean);
  return out;
}

/// Running mean and sum of squared deviations per component (Welford), with
/// Chan's pairwise merge.
struct Moments {
  std::uint64_t n = 0;
  double mean_re = 0.0, m2_re = 0.0;
  double mean_im = 0.0, m2_im = 0.0;

  void add(std::complex<double> z) {
    ++n;
    const double dn = static_cast<double>(n);
    const double dr = z.real() - mean_re;
    mean_re += dr / dn;
    m2_re += dr * (z.real() - mean_re);
    const double di = z.imag() - mean_im;
    mean_im += di / dn;
    m2_im += di * (z.imag() - mean_im);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    const double total = na + nb;
    const double dr = o.mean_re - mean_re;
    const double di = o.mean_im - mean_im;
    mean_re += dr * nb / total;
    mean_im += di * nb / total;
    m2_re += o.m2_re + dr * dr * na * nb / total;
    m2_im += o.m2_im + di * di * na * nb / total;
    n += o.n;
  }

  void add_zeros(std::uint64_t k) { merge(Moments{k, 0.0, 0.0, 0.0, 0.0}); }

  MCEstimate estimate(std::uint64_t exploded) const {
    MCEstimate e;
    e.mean = {mean_re, mean_im};
    e.n_samples = n;
    e.n_exploded = exploded;
    if (n > 1) {
      const double dn = static_cast<double>(n);
      e.stderr_re = std::sqrt(std::max(0.0, m2_re) / (dn - 1.0) / dn);
      e.stderr_im = std::sqrt(std::max(0.0, m2_im) / (dn - 1.0) / dn);
    }
    return e;
  }
};

/// Accumulates per-sample contributions into a fixed number of slots. Each
/// sample may emit at most once per slot; slots it skips count as zero.
class Tally {
 public:
  explicit Tally(std::size_t slots) : slots_(slots) {}

  void emit(std::size_t slot, std::complex<double> value) { slots_[slot].add(value); }

  void finish_sample(bool exploded) {
    ++count_;
    if (exploded) ++exploded_;
  }

  /// Folds in the zero contributions of samples that skipped each slot.
  void close() {
    for (auto& s : slots_) s.add_zeros(count_ - s.n);
  }

  void merge(const Tally& other) {
    for (std::size_t i = 0; i < slots_.size(); ++i) slots_[i].merge(other.slots_[i]);
    count_ += other.count_;
    exploded_ += other.exploded_;
  }

  std::vector<MCEstimate> estimates() const {
    std::vector<MCEstimate> out;
    out.reserve(slots_.size());
    for (const auto& s : slots_) out.push_back(s.estimate(exploded_));
    return out;
  }

 private:
  std::vector<Moments> slots_;
  std::uint64_t count_ = 0;
  std::uint64_t exploded_ = 0;
};

/// Runs `n` samples in chunks of cfg.chunk_size. Chunk k draws from
/// Stream(cfg.seed, k); per-chunk tallies are merged in chunk order, so the
/// result is bit-identical for any worker count.
///
/// `sample(Stream&, Tally&)` performs one sample, emits into the tally and
/// returns true if the sample was discarded as exploded.
template <class SampleFn>
std::vector<MCEstimate> run_chunked(std::size_t slots, std::uint64_t n, const SamplerConfig& cfg,
                                    SampleFn&& sample) {
  cfg.check();
  if (n < 1) throw InputError("sample count must be >= 1");
  const std::uint64_t chunks = (n + cfg.chunk_size - 1) / cfg.chunk_size;
  std::vector<Tally> tallies(chunks, Tally(slots));

  auto run_chunk = [&](std::uint64_t k) {
    Stream stream(cfg.seed, k);
    const std::uint64_t begin = k * cfg.chunk_size;
    const std::uint64_t count = std::min(cfg.chunk_size, n - begin);
    Tally& tally = tallies[k];
    for (std::uint64_t i = 0; i < count; ++i) tally.finish_sample(sample(stream, tally));
    tally.close();
  };

  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, chunks));
  if (workers <= 1) {
    for (std::uint64_t k = 0; k < chunks; ++k) run_chunk(k);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t k = next++; k < chunks; k = next++) {
          try {
            run_chunk(k);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = chunks;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  Tally total(slots);
  for (const auto& t : tallies) total.merge(t);
  return total.estimates();
}

}  // namespace graphfeyn
