#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "telegraph/analytic.hpp"
#include "telegraph/errors.hpp"
#include "telegraph/io.hpp"
#include "telegraph/kernels.hpp"
#include "telegraph/sim.hpp"
#include "telegraph/verify.hpp"

namespace {

using json = nlohmann::json;
using telegraph::ModelParams;
namespace an = telegraph::analytic;
namespace io = telegraph::io;

enum Exit { kOk = 0, kDomain = 2, kVerifyFail = 3, kNonConvergence = 4 };

struct Common {
  double lambda = 2.0;
  double mu = 0.5;
  double alpha = 1.0;
  double x = 0.0;
  std::string out;
  bool json = false;
  std::string isa = "auto";

  ModelParams params() const { return ModelParams{lambda, mu, alpha, x}; }
};

void add_params(CLI::App* cmd, Common& c) {
  cmd->add_option("--lambda", c.lambda, "rate of upward phases");
  cmd->add_option("--mu", c.mu, "rate of downward phases");
  cmd->add_option("--alpha", c.alpha, "absorption probability per boundary visit");
  cmd->add_option("--x", c.x, "initial position");
}

void add_output(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "write CSV to this file instead of stdout");
  cmd->add_flag("--json", c.json, "print a JSON summary envelope on stdout");
}

json params_json(const ModelParams& p) {
  return json{{"lambda", p.lambda}, {"mu", p.mu}, {"alpha", p.alpha}, {"x", p.x}};
}

// Destination for CSV: the --out file, stdout, or (with --json and no
// file) a buffer embedded in the envelope.
class CsvSink {
 public:
  explicit CsvSink(const Common& c) {
    if (!c.out.empty()) {
      file_ = std::make_unique<std::ofstream>(c.out, std::ios::binary);
      if (!*file_) throw telegraph::DomainError("cannot open output file '" + c.out + "'");
      stream_ = file_.get();
    } else if (c.json) {
      stream_ = &buffer_;
    } else {
      stream_ = &std::cout;
    }
  }
  std::ostream& stream() { return *stream_; }
  bool buffered() const { return stream_ == &buffer_; }
  std::string text() const { return buffer_.str(); }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostringstream buffer_;
  std::ostream* stream_ = nullptr;
};

// Targets of `eval`. At the left end of the support the documented
// one-sided limits are reported instead of a domain error.
using Eval = std::function<double(double, const ModelParams&)>;

struct CondArgs {
  double t = 0.0;
  double tau = 0.0;
};

Eval make_target(const std::string& target, const CondArgs& ca) {
  if (target == "psi0") {
    return [](double t, const ModelParams& p) { return t == 0.0 ? p.lambda : an::psi0(t, p); };
  }
  if (target == "psix") {
    return [](double t, const ModelParams& p) {
      if (t == 0.0) return p.lambda * std::exp(-p.mu * p.x);
      return an::psi_x(t, p);
    };
  }
  if (target == "pdf-c0") {
    return [](double y, const ModelParams& p) { return y == 0.0 ? p.lambda / 2.0 : an::pdf_c0(y, p.with_x(0.0)); };
  }
  if (target == "pdf-cx") {
    return [](double y, const ModelParams& p) {
      if (y == p.x) return p.lambda * std::exp(-p.mu * p.x) / 2.0;
      if (y < 0.0) throw telegraph::DomainError("pdf-cx: y must be >= 0");
      return an::pdf_cx(y, p);
    };
  }
  if (target == "pdf-a0") {
    return [](double y, const ModelParams& p) {
      return y == 0.0 ? p.alpha * p.lambda / 2.0 : an::pdf_a0(y, p.with_x(0.0));
    };
  }
  if (target == "cond-cdf") {
    return [ca](double v, const ModelParams& p) { return an::cond_cdf_within_cycle(v, ca.t, ca.tau, p); };
  }
  if (target == "cond-pdf") {
    // Differentiation roundoff can go slightly negative where the density vanishes.
    return [ca](double v, const ModelParams& p) {
      return std::max(0.0, an::cond_pdf_within_cycle(v, ca.t, ca.tau, p));
    };
  }
  if (target == "atom") {
    return [ca](double t, const ModelParams& p) { return t == 0.0 ? 1.0 : an::cond_atom(t, ca.tau, p); };
  }
  throw telegraph::DomainError("unknown eval target '" + target + "'");
}

struct Series {
  std::string label;
  ModelParams params;
};

struct Preset {
  std::string target;
  std::string axis;
  io::EvalGrid grid;
  CondArgs cond;
  std::vector<Series> series;
};

std::optional<Preset> find_preset(const std::string& name) {
  auto alphas = [](double mu) {
    std::vector<Series> s;
    for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) s.push_back({"alpha=" + io::format_double(a), {2.0, mu, a, 0.0}});
    return s;
  };
  auto mus = [](double x) {
    std::vector<Series> s;
    for (double m : {0.1, 0.5, 1.0, 1.5}) s.push_back({"mu=" + io::format_double(m), {2.0, m, 1.0, x}});
    return s;
  };
  if (name == "fig2-left") return Preset{"pdf-a0", "y", {0.0, 10.0, 201}, {}, alphas(0.5)};
  if (name == "fig2-right") return Preset{"pdf-a0", "y", {0.0, 10.0, 201}, {}, alphas(1.5)};
  if (name == "fig3-left") return Preset{"pdf-cx", "y", {1.0, 11.0, 201}, {}, mus(1.0)};
  if (name == "fig3-right") return Preset{"pdf-cx", "y", {2.0, 12.0, 201}, {}, mus(2.0)};
  if (name == "fig6") return Preset{"cond-pdf", "x", {0.0, 5.0, 101}, {5.0, 6.0}, mus(0.0)};
  return std::nullopt;
}

std::string axis_name(const std::string& target) {
  if (target == "psi0" || target == "psix" || target == "atom") return "t";
  if (target == "cond-cdf" || target == "cond-pdf") return "x";
  return "y";
}

int cmd_eval(const Common& c, const std::string& target_arg, const std::string& preset_name, const std::string& grid_arg,
             const CondArgs& cond_arg, json& result) {
  if (!preset_name.empty()) {
    const auto preset = find_preset(preset_name);
    if (!preset) throw telegraph::DomainError("unknown preset '" + preset_name + "'");
    const io::EvalGrid grid = grid_arg.empty() ? preset->grid : io::EvalGrid::parse(grid_arg);
    const auto xs = grid.values();
    const Eval f = make_target(preset->target, preset->cond);
    CsvSink sink(c);
    io::CsvWriter w(sink.stream());
    std::vector<std::string> head{preset->axis};
    for (const auto& s : preset->series) head.push_back(s.label);
    w.header(head);
    std::vector<std::vector<double>> cols(preset->series.size());
    for (std::size_t k = 0; k < preset->series.size(); ++k) {
      preset->series[k].params.validate();
      for (double v : xs) cols[k].push_back(f(v, preset->series[k].params));
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      std::vector<double> row{xs[i]};
      for (const auto& col : cols) row.push_back(col[i]);
      w.row(row);
    }
    result["preset"] = preset_name;
    result["target"] = preset->target;
    result["rows"] = xs.size();
    result["series"] = json::array();
    for (const auto& s : preset->series) result["series"].push_back({{"label", s.label}, {"params", params_json(s.params)}});
    if (preset->target == "cond-pdf") result["cycle"] = {{"t", preset->cond.t}, {"tau", preset->cond.tau}};
    if (sink.buffered()) result["csv"] = sink.text();
    return kOk;
  }

  if (target_arg.empty()) throw telegraph::DomainError("eval: give a target or --preset");
  if (grid_arg.empty()) throw telegraph::DomainError("eval: --grid start:stop:points is required");
  const ModelParams p = c.params();
  p.validate();
  const bool cond = target_arg == "cond-cdf" || target_arg == "cond-pdf" || target_arg == "atom";
  if (cond && p.x != 0.0) throw telegraph::DomainError("eval " + target_arg + ": requires --x 0");
  if (cond && !(cond_arg.tau > 0.0)) throw telegraph::DomainError("eval " + target_arg + ": --tau is required");
  if ((target_arg == "cond-cdf" || target_arg == "cond-pdf") && !(cond_arg.t > 0.0)) {
    throw telegraph::DomainError("eval " + target_arg + ": --t is required");
  }
  const Eval f = make_target(target_arg, cond_arg);
  const auto xs = io::EvalGrid::parse(grid_arg).values();

  CsvSink sink(c);
  io::CsvWriter w(sink.stream());
  std::vector<std::string> head{axis_name(target_arg), "value", "lambda", "mu", "alpha", "x"};
  if (cond) {
    head.push_back("t");
    head.push_back("tau");
  }
  w.header(head);
  double lo = INFINITY;
  double hi = -INFINITY;
  for (double v : xs) {
    const double value = f(v, p);
    lo = std::min(lo, value);
    hi = std::max(hi, value);
    std::vector<double> row{v, value, p.lambda, p.mu, p.alpha, p.x};
    if (cond) {
      row.push_back(target_arg == "atom" ? v : cond_arg.t);
      row.push_back(cond_arg.tau);
    }
    w.row(row);
  }
  result["target"] = target_arg;
  result["params"] = params_json(p);
  result["rows"] = xs.size();
  result["min_value"] = lo;
  result["max_value"] = hi;
  if (sink.buffered()) result["csv"] = sink.text();
  return kOk;
}

int cmd_moments(const Common& c, unsigned n_max, json& result) {
  const ModelParams p = c.params();
  p.validate();
  if (n_max < 1) throw telegraph::DomainError("moments: --n-max must be >= 1");
  CsvSink sink(c);
  io::CsvWriter w(sink.stream());
  w.header({"n", "E_C0", "E_A0", "E_Cx", "E_Ax"});
  json rows = json::array();
  for (unsigned n = 1; n <= n_max; ++n) {
    const double c0 = an::moment_c0(n, p);
    const double a0 = an::moment_a0(n, p);
    const double cx = an::moment_cx(n, p);
    const double ax = an::moment_ax(n, p);
    w.row_cells({std::to_string(n), io::format_double(c0), io::format_double(a0), io::format_double(cx),
                 io::format_double(ax)});
    rows.push_back({{"n", n}, {"E_C0", c0}, {"E_A0", a0}, {"E_Cx", cx}, {"E_Ax", ax}});
  }
  const auto mv0 = an::closed_mean_var(p.with_x(0.0));
  const auto mv = an::closed_mean_var(p);
  w.row_cells({"mean", io::format_double(mv0.E_Cx), io::format_double(mv0.E_Ax), io::format_double(mv.E_Cx),
               io::format_double(mv.E_Ax)});
  w.row_cells({"var", io::format_double(mv0.Var_Cx), io::format_double(mv0.Var_Ax), io::format_double(mv.Var_Cx),
               io::format_double(mv.Var_Ax)});
  result["params"] = params_json(p);
  result["moments"] = rows;
  result["closed"] = {{"E_C0", mv0.E_Cx}, {"Var_C0", mv0.Var_Cx}, {"E_A0", mv0.E_Ax}, {"Var_A0", mv0.Var_Ax},
                      {"E_Cx", mv.E_Cx},  {"Var_Cx", mv.Var_Cx}, {"E_Ax", mv.E_Ax},  {"Var_Ax", mv.Var_Ax}};
  if (sink.buffered()) result["csv"] = sink.text();
  return kOk;
}

json summary_json(const telegraph::numeric::SampleSummary& s) {
  return json{{"n", s.n}, {"mean", s.mean}, {"variance", s.variance}, {"std_error", s.std_error}};
}

int cmd_simulate(const Common& c, std::size_t n, std::uint64_t seed, std::uint64_t stream, bool summary_only,
                 json& result) {
  const ModelParams p = c.params();
  p.validate();
  if (n < 1) throw telegraph::DomainError("simulate: --n must be >= 1");
  const telegraph::sim::RngSpec rng{seed, stream};
  std::vector<double> cx, ax, m;
  if (!summary_only) {
    CsvSink sink(c);
    io::CsvWriter w(sink.stream());
    w.header({"seed", "stream", "c_x", "m", "a_x"});
    const std::string s0 = std::to_string(seed);
    const std::string s1 = std::to_string(stream);
    telegraph::sim::for_each_record(p, rng, n, [&](std::uint64_t, const telegraph::sim::AbsorptionRecord& r) {
      w.row_cells({s0, s1, io::format_double(r.c_x), std::to_string(r.m), io::format_double(r.a_x)});
      cx.push_back(r.c_x);
      ax.push_back(r.a_x);
      m.push_back(r.m);
    });
    if (sink.buffered()) result["csv"] = sink.text();
    result["c_x"] = summary_json(telegraph::numeric::summarize(cx));
    result["a_x"] = summary_json(telegraph::numeric::summarize(ax));
    result["m"] = summary_json(telegraph::numeric::summarize(m));
  } else {
    const telegraph::sim::Reducer reducers[] = {telegraph::sim::reduce::c_x, telegraph::sim::reduce::a_x,
                                                telegraph::sim::reduce::m};
    const auto st = telegraph::sim::sample_many(p, rng, n, reducers);
    result["c_x"] = summary_json(st[0].summary);
    result["a_x"] = summary_json(st[1].summary);
    result["m"] = summary_json(st[2].summary);
  }
  const auto mv = an::closed_mean_var(p);
  result["params"] = params_json(p);
  result["seed"] = seed;
  result["stream"] = stream;
  result["closed"] = {{"E_Cx", mv.E_Cx}, {"Var_Cx", mv.Var_Cx}, {"E_Ax", mv.E_Ax}, {"Var_Ax", mv.Var_Ax},
                      {"E_M", 1.0 / p.alpha}};
  if (!c.json) {
    auto line = [](const char* name, const json& s) {
      std::cerr << name << ": mean " << s["mean"].get<double>() << " +- " << s["std_error"].get<double>()
                << ", variance " << s["variance"].get<double>() << '\n';
    };
    line("c_x", result["c_x"]);
    line("a_x", result["a_x"]);
    line("m", result["m"]);
  }
  return kOk;
}

int cmd_verify(const Common& c, const std::string& level, const std::string& mutate, std::uint64_t seed,
               std::size_t paths, json& result) {
  telegraph::verify::Options o;
  if (level == "fast") {
    o.level = telegraph::verify::Level::fast;
  } else if (level == "full") {
    o.level = telegraph::verify::Level::full;
  } else {
    throw telegraph::DomainError("verify: --level must be fast or full");
  }
  if (!mutate.empty() && mutate != "printed-fc0") throw telegraph::DomainError("verify: unknown mutation '" + mutate + "'");
  o.mutate_printed_fc0 = mutate == "printed-fc0";
  o.seed = seed;
  o.mc_paths = paths;
  const auto report = telegraph::verify::run(o);
  json checks = json::array();
  for (const auto& ch : report.checks) {
    if (!c.json) {
      std::cout << (ch.passed ? "PASS " : "FAIL ") << ch.name;
      if (!ch.detail.empty()) std::cout << "  [" << ch.detail << "]";
      std::cout << "  (" << io::format_double(std::round(ch.seconds * 1000.0) / 1000.0) << " s)\n";
    }
    checks.push_back({{"name", ch.name},
                      {"passed", ch.passed},
                      {"value", ch.value},
                      {"reference", ch.reference},
                      {"tolerance", ch.tolerance},
                      {"detail", ch.detail},
                      {"seconds", ch.seconds}});
  }
  result["level"] = level;
  result["mutation"] = mutate;
  result["checks"] = checks;
  result["failures"] = report.failures();
  if (!c.json) std::cout << (report.passed() ? "all checks passed" : std::to_string(report.failures()) + " check(s) failed") << '\n';
  return report.passed() ? kOk : kVerifyFail;
}

void select_isa(const std::string& isa) {
  using telegraph::kernels::Isa;
  if (isa == "scalar") {
    telegraph::kernels::set_isa(Isa::scalar);
  } else if (isa == "avx2") {
    if (telegraph::kernels::set_isa(Isa::avx2) != Isa::avx2) throw telegraph::DomainError("AVX2 not available");
  } else if (isa != "auto") {
    throw telegraph::DomainError("--isa must be auto, scalar or avx2");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elastic telegraph process: densities, moments, simulation and verification"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--isa", common.isa, "kernel variant: auto, scalar or avx2");

  std::string target, preset, grid;
  CondArgs cond;
  auto* eval = app.add_subcommand("eval", "tabulate a density or conditional law on a grid");
  eval->add_option("target", target, "psi0|psix|pdf-c0|pdf-cx|pdf-a0|cond-cdf|cond-pdf|atom");
  eval->add_option("--grid", grid, "start:stop:points");
  eval->add_option("--preset", preset, "fig2-left|fig2-right|fig3-left|fig3-right|fig6");
  eval->add_option("--t", cond.t, "time within the cycle (cond-cdf, cond-pdf)");
  eval->add_option("--tau", cond.tau, "conditioning value of T0 (cond-cdf, cond-pdf, atom)");
  add_params(eval, common);
  add_output(eval, common);

  unsigned n_max = 4;
  auto* moments = app.add_subcommand("moments", "raw moments and closed-form means/variances");
  moments->add_option("--n-max", n_max, "highest moment order");
  add_params(moments, common);
  add_output(moments, common);

  std::size_t n_paths = 10000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  bool summary_only = false;
  auto* simulate = app.add_subcommand("simulate", "simulate absorption records");
  simulate->add_option("--n", n_paths, "number of paths");
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--stream", stream, "RNG stream");
  simulate->add_flag("--summary-only", summary_only, "skip the per-record CSV (parallel reduction)");
  add_params(simulate, common);
  add_output(simulate, common);

  std::string level = "fast";
  std::string mutate;
  std::uint64_t verify_seed = 20240601;
  std::size_t verify_paths = 1'000'000;
  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("--level", level, "fast or full");
  verify->add_option("--mutate", mutate, "inject a known defect (printed-fc0)");
  verify->add_option("--seed", verify_seed, "RNG seed for Monte Carlo checks");
  verify->add_option("--paths", verify_paths, "Monte Carlo paths for full level");
  verify->add_flag("--json", common.json, "print a JSON envelope instead of the text report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kDomain;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  json envelope{{"tool", "telegraph"}, {"command", command}};
  json result = json::object();
  int code = kOk;
  std::string kind;
  std::string message;
  try {
    select_isa(common.isa);
    if (command == "eval") {
      code = cmd_eval(common, target, preset, grid, cond, result);
    } else if (command == "moments") {
      code = cmd_moments(common, n_max, result);
    } else if (command == "simulate") {
      code = cmd_simulate(common, n_paths, seed, stream, summary_only, result);
    } else {
      code = cmd_verify(common, level, mutate, verify_seed, verify_paths, result);
    }
  } catch (const telegraph::DomainError& e) {
    code = kDomain;
    kind = "domain";
    message = e.what();
  } catch (const telegraph::TruncationError& e) {
    code = kNonConvergence;
    kind = "truncation";
    message = e.what();
  } catch (const telegraph::QuadratureError& e) {
    code = kNonConvergence;
    kind = "quadrature";
    message = e.what();
  } catch (const telegraph::RunawayError& e) {
    code = kNonConvergence;
    kind = "runaway";
    message = e.what();
  } catch (const telegraph::InfeasibleConditioning& e) {
    code = kNonConvergence;
    kind = "infeasible-conditioning";
    message = e.what();
  }

  if (!kind.empty() && !common.json) std::cerr << "error (" << kind << "): " << message << '\n';
  if (common.json) {
    envelope["status"] = code == kOk ? "ok" : (code == kVerifyFail ? "verify-failed" : "error");
    envelope["exit_code"] = code;
    envelope["isa"] = telegraph::kernels::isa_name(telegraph::kernels::active_isa());
    envelope["result"] = result;
    envelope["error"] = kind.empty() ? json(nullptr) : json{{"kind", kind}, {"message", message}};
    std::cout << envelope.dump(2) << '\n';
  }
  return code;
}
