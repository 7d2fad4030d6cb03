#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "telegraph/errors.hpp"
#include "telegraph/numeric.hpp"

namespace telegraph::numeric {

namespace {

constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525637188, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk21(const Integrand& f, double a, double b, std::size_t& evals) {
  const double c = 0.5 * (a + b);
  const double hl = 0.5 * (b - a);
  std::array<double, 21> x;
  std::array<double, 21> y;
  for (int j = 0; j < 10; ++j) {
    x[2 * j] = c - hl * kXgk[j];
    x[2 * j + 1] = c + hl * kXgk[j];
  }
  x[20] = c;
  f(x, y);
  evals += 21;
  for (double v : y) {
    if (!std::isfinite(v)) {
      throw QuadratureError("integrate: integrand is not finite on [" + std::to_string(a) + ", " +
                                std::to_string(b) + "]",
                            0.0, kInf);
    }
  }
  const double fc = y[20];
  double resk = kWgk[10] * fc;
  double resg = 0.0;
  double resabs = std::fabs(resk);
  for (int j = 0; j < 10; ++j) {
    const double s = y[2 * j] + y[2 * j + 1];
    resk += kWgk[j] * s;
    resabs += kWgk[j] * (std::fabs(y[2 * j]) + std::fabs(y[2 * j + 1]));
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[10] * std::fabs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::fabs(y[2 * j] - mean) + std::fabs(y[2 * j + 1] - mean));
  }
  const double ahl = std::fabs(hl);
  resasc *= ahl;
  resabs *= ahl;
  double err = std::fabs((resk - resg) * hl);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  return {a, b, resk * hl, err};
}

// Adaptive bisection on a finite interval. The error target is measured
// against max(|this value|, reference) so tail blocks of a semi-infinite
// integral are judged relative to the whole integral.
QuadResult adapt(const Integrand& f, double a, double b, const QuadOptions& o, double reference) {
  QuadResult out;
  std::priority_queue<Panel> heap;
  Panel first = gk21(f, a, b, out.evaluations);
  double value = first.value;
  double error = first.error;
  heap.push(first);
  std::vector<Panel> frozen;  // panels too narrow to split further
  auto target = [&] { return std::max(o.abs_tol, o.rel_tol * std::max(std::fabs(value), reference)); };
  std::size_t splits = 0;
  while (error > target() && !heap.empty()) {
    if (splits >= o.max_subdivisions) {
      throw QuadratureError("integrate: tolerance not met after " + std::to_string(splits) +
                                " subdivisions (estimate " + std::to_string(error) + ")",
                            value, error);
    }
    Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b) || (p.b - p.a) < 64.0 * kEps * std::max(std::fabs(p.a), std::fabs(p.b))) {
      frozen.push_back(p);
      continue;
    }
    const Panel l = gk21(f, p.a, mid, out.evaluations);
    const Panel r = gk21(f, mid, p.b, out.evaluations);
    value += l.value + r.value - p.value;
    error += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++splits;
  }
  // Resum to shed the drift of incremental updates.
  double v = 0.0;
  double e = 0.0;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  for (const Panel& p : frozen) {
    v += p.value;
    e += p.error;
  }
  if (e > target() && !frozen.empty()) {
    throw QuadratureError("integrate: roundoff limits the attainable accuracy", v, e);
  }
  out.value = v;
  out.abs_error_estimate = e;
  return out;
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& o) {
  if (!(o.rel_tol > 0.0 || o.abs_tol > 0.0)) throw DomainError("integrate: need a positive tolerance");
  if (!std::isfinite(a)) throw DomainError("integrate: lower limit must be finite");
  if (!(b > a)) throw DomainError("integrate: require a < b");
  if (std::isfinite(b)) return adapt(f, a, b, o, 0.0);

  QuadResult out;
  const bool known_rate = o.decay_rate > 0.0;
  double block = o.initial_block > 0.0 ? o.initial_block : (known_rate ? 4.0 / o.decay_rate : 8.0);
  double lo = a;
  double total = 0.0;
  double err = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double hi = lo + block;
    const QuadResult r = adapt(f, lo, hi, o, std::fabs(total));
    total += r.value;
    err += r.abs_error_estimate;
    out.evaluations += r.evaluations;

    const double f_hi = std::fabs(f(hi));
    double rate = o.decay_rate;
    if (!known_rate) {
      const double probe = hi - 0.25 * block;
      const double f_probe = std::fabs(f(probe));
      out.evaluations += 1;
      rate = (f_hi > 0.0 && f_probe > f_hi) ? std::log(f_probe / f_hi) / (hi - probe) : 0.0;
    }
    out.evaluations += 1;
    if (f_hi == 0.0) {
      out.tail_bound = 0.0;
      break;
    }
    if (rate > 0.0) {
      const double tail = f_hi / rate;
      if (tail <= o.tail_rel * std::fabs(total) || (o.abs_tol > 0.0 && tail <= 1e-6 * o.abs_tol)) {
        out.tail_bound = tail;
        err += tail;
        break;
      }
    }
    if (k == 63) {
      throw QuadratureError("integrate: tail did not decay over the probed range", total, err);
    }
    lo = hi;
    block *= 2.0;
  }
  out.value = total;
  out.abs_error_estimate = err;
  return out;
}

QuadResult integrate(const Integrand& f, double a, double b, double tol) {
  QuadOptions o;
  o.rel_tol = tol;
  return integrate(f, a, b, o);
}

std::vector<double> cumulative_integral(const Integrand& f, double lo, std::span<const double> sorted_points,
                                        double tol) {
  std::vector<double> out(sorted_points.size());
  QuadOptions o;
  o.rel_tol = tol;
  o.abs_tol = 1e-15;
  double acc = 0.0;
  double prev = lo;
  for (std::size_t i = 0; i < sorted_points.size(); ++i) {
    const double x = sorted_points[i];
    if (x < prev) throw DomainError("cumulative_integral: points must be ascending and >= lo");
    if (x > prev) acc += adapt(f, prev, x, o, 0.0).value;
    out[i] = acc;
    prev = x;
  }
  return out;
}

double numeric_mgf(const Integrand& pdf, double s, double lo, double decay_rate, double tol) {
  if (!(s < decay_rate)) throw DomainError("numeric_mgf: s must be below the decay rate of the density");
  QuadOptions o;
  o.rel_tol = tol;
  o.decay_rate = decay_rate - s;
  const Integrand g = Integrand::batch([&pdf, s](std::span<const double> x, std::span<double> y) {
    pdf(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] *= std::exp(s * x[i]);
  });
  return integrate(g, lo, kInf, o).value;
}

double numeric_moment(const Integrand& pdf, unsigned n, double lo, double decay_rate, double tol) {
  if (!(decay_rate > 0.0)) throw DomainError("numeric_moment: decay rate must be positive");
  QuadOptions o;
  o.rel_tol = tol;
  // y^n e^{-k y} decays at any rate below k; leave some margin for the power.
  o.decay_rate = 0.9 * decay_rate;
  o.initial_block = (4.0 + n) / decay_rate;
  const Integrand g = Integrand::batch([&pdf, n](std::span<const double> x, std::span<double> y) {
    pdf(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] *= std::pow(x[i], static_cast<double>(n));
  });
  return integrate(g, lo, kInf, o).value;
}

}  // namespace telegraph::numeric
