#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace fermistab {

struct MCEstimate {
  double mean = 0.0;
  double std_err = 0.0;  // sample standard deviation / sqrt(n)
  long long n_samples = 0;
  std::uint64_t seed = 0;
};

/// Counter-based generator: the stream of draws depends only on
/// (master seed, substream index), never on evaluation order. Substream i
/// is handed to sample i, so parallel schedules reproduce the serial run.
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t master_seed, std::uint64_t substream);

  std::uint64_t next_u64();
  double uniform();        // [0, 1)
  double normal();         // standard normal, Box-Muller

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// A proposal distribution on R^dim: `sample` fills one point, `density`
/// evaluates the (normalised) proposal density at a point.
struct McSampler {
  int dim = 1;
  std::function<void(SubstreamRng&, std::span<double>)> sample;
  std::function<double(std::span<const double>)> density;
};

/// Importance-sampled mean of integrand/density. Deterministic for a fixed
/// seed: per-sample substreams plus a fixed batch reduction order make the
/// result independent of worker parallelism.
MCEstimate mc_integrate(const McSampler& sampler,
                        const std::function<double(std::span<const double>)>& integrand,
                        long long n_samples, std::uint64_t seed);

/// Worker cap: FERMI_STABILITY_THREADS if set, hardware concurrency otherwise.
int thread_count();

/// Runs chunk_fn(begin, end) over [0, n) split into contiguous chunks.
void parallel_for(long long n, const std::function<void(long long, long long)>& chunk_fn);

}  // namespace fermistab
