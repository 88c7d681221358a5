#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kqpd/bench.hpp"
#include "kqpd/cli.hpp"
#include "kqpd/error.hpp"
#include "kqpd/grid.hpp"
#include "kqpd/validate.hpp"

namespace kqpd {
namespace {

using ojson = nlohmann::ordered_json;

std::string fmt(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

KerrState state_of(const RunConfig& c) { return {std::polar(c.alpha_abs, c.alpha_arg), c.gamma}; }

FEvalOptions husimi_opts(const RunConfig& c) { return {c.correction_order, c.branch_window, c.direct_threshold}; }

WignerOptions wigner_opts(const RunConfig& c, bool exact) { return {c.rel_eps, c.kmax_cap, exact}; }

// auto: exact kernel wherever its cost is small (4|alpha beta| <= 1e3), where
// the leading asymptotic term's O(1/x) error would dominate.
bool use_exact_bessel(const RunConfig& c, double beta_abs) {
  if (c.bessel == "exact") return true;
  if (c.bessel == "asymptotic") return false;
  return 4.0 * c.alpha_abs * beta_abs <= kBesselExactMaxAbs;
}

std::array<int, 2> parse_res(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw Error(Errc::precondition, "--res must look like NxM");
  try {
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw Error(Errc::precondition, "--res must look like NxM");
  }
}

int fock_cut(const RunConfig& c) {
  const double a2 = c.alpha_abs * c.alpha_abs;
  const int need = static_cast<int>(std::ceil(a2 + 10.0 * std::sqrt(a2 + 1.0)));
  if (c.n_cut > 0) return c.n_cut;
  if (need > 400)
    throw Error(Errc::oracle_out_of_range,
                "wigner oracle (Fock basis) requires |alpha|^2 + 10 sqrt(|alpha|^2 + 1) <= 400, i.e. |alpha| <= ~17.9");
  return std::min(400, std::max(60, need + 20));
}

int cmd_point(const RunConfig& c, bool json, std::ostream& out) {
  const KerrState st = state_of(c);
  const cplx beta(c.beta_re, c.beta_im);
  ojson j;
  j["config"] = ojson::parse(c.to_json());
  auto put = [&](const char* key, const LogReal& v) {
    j[key] = {{"value", v.value()}, {"log_mag", v.sign == 0 ? ojson(nullptr) : ojson(v.log_mag)}, {"sign", v.sign}};
  };
  LogReal fast, oracle;
  const bool want_fast = c.method != "oracle";
  const bool want_oracle = c.method != "fast";
  if (c.kind == "husimi") {
    if (want_fast) {
      fast = husimi_point(st, beta, husimi_opts(c));
      put("fast", fast);
      j["fast"]["method"] = "saddle-point";
    }
    if (want_oracle) {
      oracle = husimi_direct(st, beta);
      put("oracle", oracle);
      j["oracle"]["method"] = "direct-series";
    }
  } else {
    if (want_fast) {
      const bool exact = use_exact_bessel(c, std::abs(beta));
      const WignerPointResult r = wigner_point_detailed(st, beta, wigner_opts(c, exact));
      fast = r.value;
      put("fast", fast);
      j["fast"]["method"] = r.closed_form ? "closed-form" : (exact ? "fourier-bessel-exact" : "fourier-bessel-asymptotic");
      j["fast"]["kmax"] = r.kmax;
      j["fast"]["kmax_truncated"] = r.truncated;
    }
    if (want_oracle) {
      const int n_cut = fock_cut(c);
      oracle = LogReal::from(wigner_fock_oracle(st, beta, n_cut));
      put("oracle", oracle);
      j["oracle"]["method"] = "fock-basis";
      j["oracle"]["n_cut"] = n_cut;
    }
  }
  if (want_fast && want_oracle) {
    j["deviation_abs"] = std::fabs(fast.value() - oracle.value());
    if (fast.sign != 0 && oracle.sign != 0) j["deviation_log"] = std::fabs(fast.log_mag - oracle.log_mag);
  }
  if (json) {
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "kind: " << c.kind << "\n";
  out << "beta: " << fmt(c.beta_re) << " " << fmt(c.beta_im) << "\n";
  for (const char* key : {"fast", "oracle"}) {
    if (!j.contains(key)) continue;
    const auto& v = j[key];
    out << key << ".method: " << v["method"].get<std::string>() << "\n";
    out << key << ".value: " << fmt(v["value"].get<double>()) << "\n";
    out << key << ".log_mag: " << (v["log_mag"].is_null() ? std::string("-inf") : fmt(v["log_mag"].get<double>()))
        << "\n";
    out << key << ".sign: " << v["sign"].get<int>() << "\n";
    if (v.contains("kmax")) out << key << ".kmax: " << v["kmax"].get<long>() << "\n";
  }
  if (j.contains("deviation_abs")) out << "deviation_abs: " << fmt(j["deviation_abs"].get<double>()) << "\n";
  if (j.contains("deviation_log")) out << "deviation_log: " << fmt(j["deviation_log"].get<double>()) << "\n";
  return kExitOk;
}

GridSpec resolve_spec(RunConfig& c, const KerrState& st) {
  GridSpec s = auto_window(st);
  if (c.mode != "auto") {
    s.mode = grid_mode_from(c.mode);
    if (s.mode == GridMode::polar && c.extent0 == 0.0 && c.extent1 == 0.0 && auto_window(st).mode != GridMode::polar)
      throw Error(Errc::precondition, "polar mode needs --extent0/--extent1 for this state");
  }
  if (c.center_re != 0.0 || c.center_im != 0.0) s.center = {c.center_re, c.center_im};
  if (c.extent0 > 0.0) s.extent[0] = c.extent0;
  if (c.extent1 > 0.0) s.extent[1] = c.extent1;
  s.resolution = parse_res(c.res);
  // echo the resolved window so the config reproduces the run
  c.mode = to_string(s.mode);
  c.center_re = s.center.real();
  c.center_im = s.center.imag();
  c.extent0 = s.extent[0];
  c.extent1 = s.extent[1];
  return s;
}

int cmd_field(RunConfig c, std::ostream& out) {
  const KerrState st = state_of(c);
  const GridSpec spec = resolve_spec(c, st);
  EvalOptions eo;
  eo.husimi = husimi_opts(c);
  eo.wigner = wigner_opts(c, c.bessel == "exact");
  eo.workers = c.workers;
  const FieldKind kind = field_kind_from(c.kind);
  QpdField f = eval_field(st, spec, kind, eo);
  f.run_config = c.to_json();

  double lo = 1e300, hi = -1e300;
  for (const auto& v : f.values) {
    lo = std::min(lo, v.value());
    hi = std::max(hi, v.value());
  }
  if (!c.out.empty()) write_field(f, c.format == "csv" ? FieldFormat::csv : FieldFormat::json, c.out);
  out << "kind: " << c.kind << "\n";
  out << "grid: " << to_string(spec.mode) << " " << spec.resolution[0] << "x" << spec.resolution[1] << "\n";
  out << "points: " << f.stats.points << "\n";
  out << "wall_time_s: " << f.stats.wall_time << "\n";
  out << "integral: " << fmt(integrate_field(f)) << "\n";
  out << "min: " << fmt(lo) << "\n";
  out << "max: " << fmt(hi) << "\n";
  if (kind == FieldKind::wigner) {
    out << "kmax: min " << f.stats.kmax_min << " mean " << f.stats.kmax_mean << " max " << f.stats.kmax_max << "\n";
    if (lo < 0.0) out << "NEGATIVITY: min W = " << fmt(lo) << " < 0\n";
  }
  if (!c.out.empty()) out << "wrote: " << c.out << "\n";
  return kExitOk;
}

int cmd_validate(const RunConfig& c, bool json, std::ostream& out) {
  if (c.scale != "small" && c.scale != "full") throw Error(Errc::precondition, "--scale must be small or full");
  const ValidationReport rep = run_validation({c.scale, c.seed});
  ojson j = ojson::parse(rep.to_json());
  j["config"] = ojson::parse(c.to_json());
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) throw Error(Errc::io, "cannot open '" + c.out + "'");
    f << j.dump(2) << "\n";
  }
  if (json) {
    out << j.dump(2) << "\n";
  } else {
    for (const auto& ck : rep.checks) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%-4s %-8s %-48s metric %.3e tol %.1e\n", ck.pass ? "ok" : "FAIL",
                    ck.suite.c_str(), ck.name.c_str(), ck.metric, ck.tolerance);
      out << buf;
    }
    out << (rep.pass() ? "validation passed\n" : "validation FAILED\n");
  }
  return rep.pass() ? kExitOk : kExitValidation;
}

int cmd_bench(const RunConfig& c, bool json, std::ostream& out) {
  BenchConfig bc;
  if (!c.alphas.empty()) bc.alphas = c.alphas;
  if (!c.direct_alphas.empty()) bc.direct_alphas = c.direct_alphas;
  bc.min_seconds = c.min_time;
  const BenchReport rep = run_bench(bc);
  ojson j = ojson::parse(rep.to_json());
  j["config"] = ojson::parse(c.to_json());
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) throw Error(Errc::io, "cannot open '" + c.out + "'");
    f << j.dump(2) << "\n";
  }
  if (json)
    out << j.dump(2) << "\n";
  else
    out << rep.table();
  return kExitOk;
}

int exit_for(Errc e) {
  switch (e) {
    case Errc::precondition:
    case Errc::io:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

}  // namespace

std::string RunConfig::to_json() const {
  ojson j;
  j["command"] = command;
  j["alpha_abs"] = alpha_abs;
  j["alpha_arg"] = alpha_arg;
  j["gamma"] = gamma;
  j["beta_re"] = beta_re;
  j["beta_im"] = beta_im;
  j["kind"] = kind;
  j["method"] = method;
  j["bessel"] = bessel;
  j["correction_order"] = correction_order;
  j["branch_window"] = branch_window;
  j["direct_threshold"] = direct_threshold;
  j["rel_eps"] = rel_eps;
  j["kmax_cap"] = kmax_cap;
  j["n_cut"] = n_cut;
  j["res"] = res;
  j["mode"] = mode;
  j["center_re"] = center_re;
  j["center_im"] = center_im;
  j["extent0"] = extent0;
  j["extent1"] = extent1;
  j["seed"] = seed;
  j["format"] = format;
  j["scale"] = scale;
  j["alphas"] = alphas;
  j["direct_alphas"] = direct_alphas;
  j["min_time"] = min_time;
  return j.dump();
}

RunConfig RunConfig::from_json(const std::string& text) {
  ojson j = ojson::parse(text);
  if (j.contains("config")) j = j["config"];
  RunConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j[key].get<std::remove_reference_t<decltype(field)>>();
  };
  get("command", c.command);
  get("alpha_abs", c.alpha_abs);
  get("alpha_arg", c.alpha_arg);
  get("gamma", c.gamma);
  get("beta_re", c.beta_re);
  get("beta_im", c.beta_im);
  get("kind", c.kind);
  get("method", c.method);
  get("bessel", c.bessel);
  get("correction_order", c.correction_order);
  get("branch_window", c.branch_window);
  get("direct_threshold", c.direct_threshold);
  get("rel_eps", c.rel_eps);
  get("kmax_cap", c.kmax_cap);
  get("n_cut", c.n_cut);
  get("res", c.res);
  get("mode", c.mode);
  get("center_re", c.center_re);
  get("center_im", c.center_im);
  get("extent0", c.extent0);
  get("extent1", c.extent1);
  get("seed", c.seed);
  get("format", c.format);
  get("scale", c.scale);
  get("alphas", c.alphas);
  get("direct_alphas", c.direct_alphas);
  get("min_time", c.min_time);
  return c;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Husimi Q and Wigner W of Kerr-evolved coherent states"};
  app.require_subcommand(1);
  RunConfig c;
  bool json = false;
  std::string from_config;

  auto add_state = [&](CLI::App* s) {
    s->add_option("--alpha-abs", c.alpha_abs, "|alpha|")->check(CLI::NonNegativeNumber);
    s->add_option("--alpha-arg", c.alpha_arg, "arg alpha [rad]");
    s->add_option("--gamma", c.gamma, "Kerr phase Gamma");
    s->add_option("--kind", c.kind, "husimi | wigner")->check(CLI::IsMember({"husimi", "wigner"}));
    s->add_option("--bessel", c.bessel, "auto | exact | asymptotic")
        ->check(CLI::IsMember({"auto", "exact", "asymptotic"}));
    s->add_option("--correction-order", c.correction_order, "saddle correction terms")->check(CLI::Range(0, 8));
    s->add_option("--branch-window", c.branch_window, "branches around k-bar")->check(CLI::Range(0, 64));
    s->add_option("--direct-threshold", c.direct_threshold, "|A| below which the direct series is used");
    s->add_option("--rel-eps", c.rel_eps, "Wigner series truncation target");
    s->add_option("--kmax-cap", c.kmax_cap, "hard cap on k_max (0 = automatic)");
    s->add_flag("--json", json, "print JSON instead of text");
  };

  CLI::App* point = app.add_subcommand("point", "evaluate Q or W at one beta");
  add_state(point);
  point->add_option("--beta-re", c.beta_re, "Re beta");
  point->add_option("--beta-im", c.beta_im, "Im beta");
  point->add_option("--method", c.method, "fast | oracle | both")->check(CLI::IsMember({"fast", "oracle", "both"}));
  point->add_option("--n-cut", c.n_cut, "Fock cutoff for the Wigner oracle (0 = automatic)");

  CLI::App* field = app.add_subcommand("field", "evaluate a phase-space grid");
  add_state(field);
  field->add_option("--res", c.res, "resolution NxM");
  field->add_option("--mode", c.mode, "auto | cartesian | polar")->check(CLI::IsMember({"auto", "cartesian", "polar"}));
  field->add_option("--center-re", c.center_re, "window center, Re");
  field->add_option("--center-im", c.center_im, "window center, Im");
  field->add_option("--extent0", c.extent0, "half-width of axis 0");
  field->add_option("--extent1", c.extent1, "half-width of axis 1");
  field->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  field->add_option("--out", c.out, "output path");
  field->add_option("--format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  field->add_option("--from-config", from_config, "re-run from a JSON artifact or config");

  CLI::App* validate = app.add_subcommand("validate", "run oracle-equivalence suites");
  validate->add_option("--scale", c.scale, "small | full")->check(CLI::IsMember({"small", "full"}));
  validate->add_option("--seed", c.seed, "sampling seed");
  validate->add_option("--out", c.out, "JSON verdict path");
  validate->add_flag("--json", json, "print JSON instead of text");

  CLI::App* bench = app.add_subcommand("bench", "per-point timing and scaling slopes");
  bench->add_option("--alphas", c.alphas, "|alpha| values for the fast paths")->delimiter(',');
  bench->add_option("--direct-alphas", c.direct_alphas, "|alpha| values for the direct oracle")->delimiter(',');
  bench->add_option("--min-time", c.min_time, "seconds per timing batch");
  bench->add_option("--out", c.out, "JSON report path");
  bench->add_flag("--json", json, "print JSON instead of text");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (point->parsed()) {
      c.command = "point";
      return cmd_point(c, json, out);
    }
    if (field->parsed()) {
      if (!from_config.empty()) {
        std::ifstream in(from_config);
        if (!in) throw Error(Errc::io, "cannot open '" + from_config + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        RunConfig loaded = RunConfig::from_json(ss.str());
        if (field->count("--out")) loaded.out = c.out;
        if (field->count("--format")) loaded.format = c.format;
        if (field->count("--workers")) loaded.workers = c.workers;
        c = loaded;
      }
      c.command = "field";
      return cmd_field(c, out);
    }
    if (validate->parsed()) {
      c.command = "validate";
      return cmd_validate(c, json, out);
    }
    c.command = "bench";
    return cmd_bench(c, json, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace kqpd
