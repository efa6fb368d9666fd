#include "fermistab/monte_carlo.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "fermistab/errors.hpp"

namespace fermistab {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

SubstreamRng::SubstreamRng(std::uint64_t master_seed, std::uint64_t substream) {
  std::uint64_t s = master_seed;
  const std::uint64_t a = splitmix64(s);
  state_ = a ^ (substream * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL);
  // One warm-up mix so neighbouring substreams decorrelate.
  (void)splitmix64(state_);
}

std::uint64_t SubstreamRng::next_u64() { return splitmix64(state_); }

double SubstreamRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SubstreamRng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

int thread_count() {
  if (const char* env = std::getenv("FERMI_STABILITY_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(long long n, const std::function<void(long long, long long)>& chunk_fn) {
  const int workers = static_cast<int>(std::min<long long>(thread_count(), std::max<long long>(n, 1)));
  if (workers <= 1) {
    chunk_fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  const long long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long long begin = w * chunk;
    const long long end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        chunk_fn(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

MCEstimate mc_integrate(const McSampler& sampler,
                        const std::function<double(std::span<const double>)>& integrand,
                        long long n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw DomainError("mc_integrate: n_samples must be >= 1");
  if (sampler.dim < 1 || sampler.dim > 32)
    throw DomainError("mc_integrate: dim must be in [1, 32]");
  if (!sampler.sample || !sampler.density) throw DomainError("mc_integrate: incomplete sampler");

  // Fixed batch layout: batch sums are accumulated in sample order and then
  // reduced in batch order, so the result does not depend on the number of
  // workers.
  const int n_batches = static_cast<int>(std::min<long long>(256, n_samples));
  std::vector<double> batch_sum(n_batches, 0.0);
  std::vector<double> batch_sumsq(n_batches, 0.0);

  parallel_for(n_batches, [&](long long b_begin, long long b_end) {
    std::array<double, 32> buf{};
    std::span<double> point(buf.data(), static_cast<size_t>(sampler.dim));
    for (long long b = b_begin; b < b_end; ++b) {
      const long long lo = b * n_samples / n_batches;
      const long long hi = (b + 1) * n_samples / n_batches;
      double sum = 0.0, sumsq = 0.0;
      for (long long i = lo; i < hi; ++i) {
        SubstreamRng rng(seed, static_cast<std::uint64_t>(i));
        sampler.sample(rng, point);
        const double rho = sampler.density(point);
        const double f = integrand(point);
        double v = 0.0;
        if (rho > 0.0) {
          v = f / rho;
        } else if (f != 0.0) {
          throw ZeroDensity("mc_integrate: zero proposal density at a point with nonzero integrand");
        }
        sum += v;
        sumsq += v * v;
      }
      batch_sum[b] = sum;
      batch_sumsq[b] = sumsq;
    }
  });

  double total = 0.0, total_sq = 0.0;
  for (int b = 0; b < n_batches; ++b) {
    total += batch_sum[b];
    total_sq += batch_sumsq[b];
  }
  MCEstimate est;
  est.n_samples = n_samples;
  est.seed = seed;
  est.mean = total / static_cast<double>(n_samples);
  if (n_samples > 1) {
    const double var =
        std::max(0.0, (total_sq - static_cast<double>(n_samples) * est.mean * est.mean) /
                          static_cast<double>(n_samples - 1));
    est.std_err = std::sqrt(var / static_cast<double>(n_samples));
  }
  return est;
}

}  // namespace fermistab
