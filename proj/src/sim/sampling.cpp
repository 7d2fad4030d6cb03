#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "telegraph/errors.hpp"
#include "telegraph/kernels.hpp"
#include "telegraph/sim.hpp"

namespace telegraph::sim {

namespace {

std::size_t resolve_threads(std::size_t requested, std::size_t work_units) {
  std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, work_units));
}

// Runs fn(i) for i in [0, count) on `threads` workers.
template <class Fn>
void run_blocks(std::size_t count, std::size_t threads, Fn fn) {
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Partial moments of one block, merged in block order.
struct Partial {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double lag_cross = 0.0;  // sum over the block of v[i] v[i-1]
  double first = 0.0;
  double last = 0.0;
  double sum = 0.0;
};

Partial block_partial(std::span<const double> v) {
  Partial b;
  b.n = v.size();
  if (v.empty()) return b;
  b.sum = kernels::sum(v);
  b.mean = b.sum / static_cast<double>(b.n);
  b.m2 = kernels::sum_sq_dev(v, b.mean);
  for (std::size_t i = 1; i < v.size(); ++i) b.lag_cross += (v[i] - b.mean) * (v[i - 1] - b.mean);
  b.first = v.front();
  b.last = v.back();
  return b;
}

numeric::SampleSummary merge(const std::vector<Partial>& parts) {
  numeric::SampleSummary s;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (const auto& b : parts) {
    if (b.n == 0) continue;
    const double nb = static_cast<double>(b.n);
    const double na = static_cast<double>(n);
    const double delta = b.mean - mean;
    mean += delta * nb / (na + nb);
    m2 += b.m2 + delta * delta * na * nb / (na + nb);
    n += b.n;
  }
  s.n = n;
  s.mean = mean;
  if (n > 1) {
    s.variance = m2 / static_cast<double>(n - 1);
    s.std_error = std::sqrt(s.variance / static_cast<double>(n));
    // Lag-1 covariance about the global mean from block-centred sums.
    double cov = 0.0;
    const Partial* prev = nullptr;
    for (const auto& b : parts) {
      if (b.n == 0) continue;
      const double shift = b.mean - mean;
      // sum (v_i - m)(v_{i-1} - m) = sum (v_i - mb)(v_{i-1} - mb)
      //   + shift * [sum (v_i - mb) + sum (v_{i-1} - mb)] + (n_b - 1) shift^2
      const double head = b.sum - b.first - (static_cast<double>(b.n) - 1.0) * b.mean;
      const double tail = b.sum - b.last - (static_cast<double>(b.n) - 1.0) * b.mean;
      cov += b.lag_cross + shift * (head + tail) + (static_cast<double>(b.n) - 1.0) * shift * shift;
      if (prev) cov += (b.first - mean) * (prev->last - mean);
      prev = &b;
    }
    s.lag1_autocorrelation = m2 > 0.0 ? cov / m2 : 0.0;
  }
  return s;
}

}  // namespace

std::vector<SampleStats> sample_many(const ModelParams& p, const RngSpec& rng, std::size_t n,
                                     std::span<const Reducer> reducers, const SampleOptions& opts) {
  p.validate();
  if (n < 1) throw DomainError("sample_many: n must be >= 1");
  if (reducers.empty()) throw DomainError("sample_many: no reducers");
  if (opts.block_size < 1) throw DomainError("sample_many: block_size must be >= 1");
  if (opts.histogram && !(opts.histogram->hi > opts.histogram->lo && opts.histogram->bins >= 1)) {
    throw DomainError("sample_many: invalid histogram spec");
  }
  const std::size_t nr = reducers.size();
  const std::size_t bs = opts.block_size;
  const std::size_t blocks = (n + bs - 1) / bs;
  const std::size_t hist_width = opts.histogram ? opts.histogram->bins + 2 : 0;

  std::vector<std::vector<Partial>> partials(nr, std::vector<Partial>(blocks));
  std::vector<std::vector<std::size_t>> hist(nr * blocks, std::vector<std::size_t>(hist_width, 0));
  std::vector<std::vector<double>> samples(nr);
  if (opts.keep_samples) {
    for (auto& s : samples) s.resize(n);
  }

  run_blocks(blocks, resolve_threads(opts.threads, blocks), [&](std::size_t b) {
    const std::size_t lo = b * bs;
    const std::size_t hi = std::min(n, lo + bs);
    std::vector<std::vector<double>> vals(nr, std::vector<double>(hi - lo));
    for (std::size_t i = lo; i < hi; ++i) {
      const AbsorptionRecord rec = simulate_absorption(p, rng, i);
      for (std::size_t r = 0; r < nr; ++r) vals[r][i - lo] = reducers[r](rec);
    }
    for (std::size_t r = 0; r < nr; ++r) {
      partials[r][b] = block_partial(vals[r]);
      if (opts.keep_samples) std::copy(vals[r].begin(), vals[r].end(), samples[r].begin() + static_cast<std::ptrdiff_t>(lo));
      if (opts.histogram) {
        const auto& h = *opts.histogram;
        auto& counts = hist[r * blocks + b];
        const double width = (h.hi - h.lo) / static_cast<double>(h.bins);
        for (double v : vals[r]) {
          if (v < h.lo) {
            ++counts[h.bins];
          } else if (v >= h.hi) {
            ++counts[h.bins + 1];
          } else {
            const auto k = std::min(h.bins - 1, static_cast<std::size_t>((v - h.lo) / width));
            ++counts[k];
          }
        }
      }
    }
  });

  std::vector<SampleStats> out(nr);
  for (std::size_t r = 0; r < nr; ++r) {
    out[r].summary = merge(partials[r]);
    if (opts.histogram) {
      out[r].histogram.assign(hist_width, 0);
      for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t k = 0; k < hist_width; ++k) out[r].histogram[k] += hist[r * blocks + b][k];
      }
    }
    if (opts.keep_samples) out[r].samples = std::move(samples[r]);
  }
  return out;
}

SampleStats sample_many(const ModelParams& p, const RngSpec& rng, std::size_t n, const Reducer& reducer,
                        const SampleOptions& opts) {
  return std::move(sample_many(p, rng, n, std::span<const Reducer>(&reducer, 1), opts).front());
}

void for_each_record(const ModelParams& p, const RngSpec& rng, std::size_t n,
                     const std::function<void(std::uint64_t, const AbsorptionRecord&)>& visit) {
  p.validate();
  for (std::uint64_t i = 0; i < n; ++i) visit(i, simulate_absorption(p, rng, i));
}

WithinCycleSample sample_within_cycle(const ModelParams& p, const RngSpec& rng, double t, double tau, double delta,
                                      std::size_t n_target, const WithinCycleOptions& opts) {
  p.validate();
  if (p.x != 0.0) throw DomainError("sample_within_cycle: requires x = 0");
  if (!(delta > 0.0) || !(t > 0.0) || !(t < tau - delta)) {
    throw DomainError("sample_within_cycle: requires 0 < t < tau - delta, delta > 0");
  }
  if (n_target < 1) throw DomainError("sample_within_cycle: n_target must be >= 1");
  constexpr std::uint64_t kBlock = 1 << 16;
  constexpr std::uint64_t kMinAttemptsForRate = 10'000'000ULL;
  const std::size_t threads = resolve_threads(opts.threads, 1 << 20);

  WithinCycleSample out;
  std::uint64_t base = 0;
  while (out.accepted < n_target) {
    if (base >= opts.max_attempts) {
      throw InfeasibleConditioning("sample_within_cycle: attempt budget exhausted with " +
                                   std::to_string(out.accepted) + " acceptances");
    }
    if (out.attempts >= kMinAttemptsForRate && out.acceptance_rate() < opts.min_acceptance) {
      throw InfeasibleConditioning("sample_within_cycle: acceptance rate " + std::to_string(out.acceptance_rate()) +
                                   " below " + std::to_string(opts.min_acceptance));
    }
    // One round: `threads` consecutive blocks, merged in attempt order.
    std::vector<std::vector<std::pair<std::uint64_t, CycleSample>>> found(threads);
    run_blocks(threads, threads, [&](std::size_t b) {
      const std::uint64_t lo = base + b * kBlock;
      for (std::uint64_t i = lo; i < lo + kBlock; ++i) {
        const auto s = simulate_cycle_state(p, rng, i, t, tau + delta);
        if (s && std::fabs(s->t0 - tau) < delta) found[b].emplace_back(i, *s);
      }
    });
    for (const auto& block : found) {
      for (const auto& [idx, s] : block) {
        if (out.accepted == n_target) break;
        ++out.accepted;
        out.attempts = idx + 1;
        if (s.x == t) ++out.atom_count;
        out.x.push_back(s.x);
        out.w.push_back(s.w);
        out.t0.push_back(s.t0);
      }
    }
    base += threads * kBlock;
    if (out.accepted < n_target) out.attempts = base;
  }
  return out;
}

}  // namespace telegraph::sim
