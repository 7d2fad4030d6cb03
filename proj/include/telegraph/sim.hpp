#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "telegraph/model.hpp"
#include "telegraph/numeric.hpp"

// Event-driven Monte Carlo of the elastic telegraph process.
namespace telegraph::sim {

struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

/// Counter-based generator for one path. Distinct (seed, stream, path)
/// triples address disjoint counter ranges, so paths can be generated in
/// any order or on any thread with identical results.
class PathRng {
 public:
  PathRng(const RngSpec& spec, std::uint64_t path_index);

  /// Uniform on (0, 1] with 53 random bits.
  double uniform();
  /// Exp(rate) by inverse transform.
  double exponential(double rate);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
};

enum class Phase { up, down, truncated_down };
enum class BoundaryOutcome { reflected, absorbed };

struct PathTrace {
  struct Vertex {
    double time;
    double position;
  };
  struct BoundaryEvent {
    double time;
    BoundaryOutcome outcome;
  };
  std::vector<Vertex> vertices;       // vertices[i] -> vertices[i+1] is segment i
  std::vector<Phase> phases;          // one per segment
  std::vector<BoundaryEvent> events;
};

/// One realization. a_x is the ordered sum c_x + cycles[0] + ... so the
/// decomposition holds exactly in floating point.
struct AbsorptionRecord {
  double c_x = 0.0;
  std::vector<double> cycles;
  unsigned m = 1;
  double a_x = 0.0;

  /// Builds the record and checks m >= 1, |cycles| = m - 1.
  static AbsorptionRecord make(double c_x, std::vector<double> cycles);
};

inline constexpr std::uint64_t kEventCap = 1'000'000'000ULL;

/// Simulates one path from x (moving upward) until absorption. Throws
/// RunawayError after `event_cap` phases.
AbsorptionRecord simulate_absorption(const ModelParams& p, const RngSpec& rng, std::uint64_t path_index = 0,
                                     PathTrace* trace = nullptr, std::uint64_t event_cap = kEventCap);

using Reducer = std::function<double(const AbsorptionRecord&)>;

namespace reduce {
inline double c_x(const AbsorptionRecord& r) { return r.c_x; }
inline double a_x(const AbsorptionRecord& r) { return r.a_x; }
inline double m(const AbsorptionRecord& r) { return static_cast<double>(r.m); }
}  // namespace reduce

struct HistogramSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t bins = 10;
};

struct SampleOptions {
  std::size_t threads = 0;           // 0: hardware concurrency
  std::size_t block_size = 4096;     // paths per work unit; fixes the reduction order
  bool keep_samples = false;
  std::optional<HistogramSpec> histogram;
};

struct SampleStats {
  numeric::SampleSummary summary;
  std::vector<std::size_t> histogram;  // bins, then underflow and overflow counts
  std::vector<double> samples;         // path order, if requested
};

/// Simulates paths 0..n-1 of the given stream and reduces each record with
/// every reducer. Results do not depend on the thread count.
std::vector<SampleStats> sample_many(const ModelParams& p, const RngSpec& rng, std::size_t n,
                                     std::span<const Reducer> reducers, const SampleOptions& opts = {});
SampleStats sample_many(const ModelParams& p, const RngSpec& rng, std::size_t n, const Reducer& reducer,
                        const SampleOptions& opts = {});

/// Visits records 0..n-1 in path order (single-threaded); for CSV dumps.
void for_each_record(const ModelParams& p, const RngSpec& rng, std::size_t n,
                     const std::function<void(std::uint64_t, const AbsorptionRecord&)>& visit);

// Within-cycle state conditioned on the cycle length.

struct CycleSample {
  double t0;  // half the cycle length
  double x;   // X(t)
  double w;   // upward time in (0, t]
};

/// Simulates one renewal cycle from 0 and reports X(t). Returns nothing when
/// the cycle ends before t or when T0 is certain to exceed `t0_max`.
std::optional<CycleSample> simulate_cycle_state(const ModelParams& p, const RngSpec& rng, std::uint64_t index,
                                                double t, double t0_max);

struct WithinCycleSample {
  std::size_t accepted = 0;
  std::uint64_t attempts = 0;
  std::size_t atom_count = 0;     // X(t) = t
  std::vector<double> x;          // all accepted X(t), in attempt order
  std::vector<double> w;          // matching W(t)
  std::vector<double> t0;         // matching T0
  double acceptance_rate() const { return attempts ? static_cast<double>(accepted) / attempts : 0.0; }
  double atom_frequency() const { return accepted ? static_cast<double>(atom_count) / accepted : 0.0; }
};

struct WithinCycleOptions {
  std::size_t threads = 0;
  std::uint64_t max_attempts = 2'000'000'000ULL;
  double min_acceptance = 1e-6;
};

/// Rejection sampler for X(t) given T0 in (tau - delta, tau + delta).
/// Throws InfeasibleConditioning once at least 10^7 attempts have been made
/// with an acceptance rate below opts.min_acceptance, or when max_attempts
/// is exhausted before n_target acceptances.
WithinCycleSample sample_within_cycle(const ModelParams& p, const RngSpec& rng, double t, double tau, double delta,
                                      std::size_t n_target, const WithinCycleOptions& opts = {});

}  // namespace telegraph::sim
