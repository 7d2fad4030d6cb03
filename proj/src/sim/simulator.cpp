#include <string>

#include "telegraph/errors.hpp"
#include "telegraph/sim.hpp"

namespace telegraph::sim {

AbsorptionRecord AbsorptionRecord::make(double c_x, std::vector<double> cycles) {
  AbsorptionRecord r;
  r.c_x = c_x;
  r.m = static_cast<unsigned>(cycles.size() + 1);
  double a = c_x;
  for (double c : cycles) a += c;
  r.a_x = a;
  r.cycles = std::move(cycles);
  if (r.m < 1 || r.cycles.size() != r.m - 1) throw std::logic_error("AbsorptionRecord: |cycles| != m - 1");
  return r;
}

namespace {

void runaway(std::uint64_t cap) {
  throw RunawayError("path exceeded " + std::to_string(cap) + " events; check that mu < lambda");
}

}  // namespace

AbsorptionRecord simulate_absorption(const ModelParams& p, const RngSpec& rng, std::uint64_t path_index,
                                     PathTrace* trace, std::uint64_t event_cap) {
  p.validate();
  PathRng gen(rng, path_index);
  double time = 0.0;
  double pos = p.x;
  double last_hit = 0.0;
  double c_x = 0.0;
  bool first = true;
  std::vector<double> cycles;
  std::uint64_t events = 0;
  if (trace) {
    *trace = PathTrace{};
    trace->vertices.push_back({0.0, pos});
  }
  for (;;) {
    if (++events > event_cap) runaway(event_cap);
    const double u = gen.exponential(p.lambda);
    time += u;
    pos += u;
    if (trace) {
      trace->vertices.push_back({time, pos});
      trace->phases.push_back(Phase::up);
    }

    if (++events > event_cap) runaway(event_cap);
    const double d = gen.exponential(p.mu);
    if (d < pos) {
      time += d;
      pos -= d;
      if (trace) {
        trace->vertices.push_back({time, pos});
        trace->phases.push_back(Phase::down);
      }
      continue;
    }
    time += pos;
    pos = 0.0;
    if (trace) {
      trace->vertices.push_back({time, 0.0});
      trace->phases.push_back(Phase::truncated_down);
    }
    if (first) {
      c_x = time;
      first = false;
    } else {
      cycles.push_back(time - last_hit);
    }
    last_hit = time;
    const bool absorbed = gen.uniform() <= p.alpha;
    if (trace) trace->events.push_back({time, absorbed ? BoundaryOutcome::absorbed : BoundaryOutcome::reflected});
    if (absorbed) break;
  }
  return AbsorptionRecord::make(c_x, std::move(cycles));
}

std::optional<CycleSample> simulate_cycle_state(const ModelParams& p, const RngSpec& rng, std::uint64_t index,
                                                double t, double t0_max) {
  PathRng gen(rng, index);
  const double horizon = 2.0 * t0_max;
  double time = 0.0;
  double pos = 0.0;
  double w = 0.0;
  double x_t = -1.0;
  std::uint64_t events = 0;
  for (;;) {
    if (++events > kEventCap) runaway(kEventCap);
    const double u = gen.exponential(p.lambda);
    if (x_t < 0.0 && t < time + u) {
      x_t = pos + (t - time);
      w += t - time;
    } else if (x_t < 0.0) {
      w += u;
    }
    time += u;
    pos += u;
    if (time >= horizon) return std::nullopt;

    const double d = gen.exponential(p.mu);
    const bool hit = !(d < pos);
    const double run = hit ? pos : d;
    if (x_t < 0.0 && t < time + run) x_t = pos - (t - time);
    time += run;
    pos -= run;
    if (hit) break;
    if (time >= horizon) return std::nullopt;
  }
  if (x_t < 0.0) return std::nullopt;  // cycle ended before t
  return CycleSample{time / 2.0, x_t, w};
}

}  // namespace telegraph::sim
