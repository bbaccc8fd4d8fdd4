#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ptheta/io.hpp"
#include "ptheta/ptheta.hpp"

using namespace ptheta;
using io::format_number;
using io::json;

namespace {

enum Exit { ok = 0, violated = 1, usage = 2, numerical = 3 };

struct UsageError {
  std::string flag;
  std::string message;
};

double parse_double(const std::string& flag, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v)) throw UsageError{flag, "not a finite number: '" + text + "'"};
  return v;
}

int parse_int(const std::string& flag, const std::string& text) {
  int v = 0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) throw UsageError{flag, "not an integer: '" + text + "'"};
  return v;
}

struct Range {
  double lo = 0.0, hi = 0.0;
  int steps = 0;

  std::vector<double> points() const {
    if (steps == 0) return {lo};
    std::vector<double> v;
    for (int i = 0; i <= steps; ++i) v.push_back(i == steps ? hi : lo + (hi - lo) * i / steps);
    return v;
  }
};

// lo:hi:steps, where steps counts intervals (steps + 1 points).
Range parse_range(const std::string& flag, const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos || text.find(':', b + 1) != std::string::npos) {
    throw UsageError{flag, "expected lo:hi:steps, got '" + text + "'"};
  }
  Range r{parse_double(flag, text.substr(0, a)), parse_double(flag, text.substr(a + 1, b - a - 1)),
          parse_int(flag, text.substr(b + 1))};
  if (r.steps < 1 || r.steps > 100000) throw UsageError{flag, "steps must lie in [1, 100000]"};
  return r;
}

std::vector<int> parse_int_list(const std::string& flag, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(flag, item));
  return out;
}

struct Common {
  std::string format;
  std::string output;
  std::string tol_text = "1e-12";
  double tol = 1e-12;
  Limits lim = Limits::from_environment();
};

struct QSpec {
  std::string q, q_range;

  std::vector<double> values(const Limits& lim, bool required = true) const {
    std::vector<double> qs;
    if (!q.empty()) qs.push_back(parse_double("--q", q));
    if (!q_range.empty()) qs = parse_range("--q-range", q_range).points();
    if (qs.empty() && required) throw UsageError{"--q", "one of --q or --q-range is required"};
    for (double v : qs) {
      if (!(std::fabs(v) <= lim.q_max)) {
        throw UsageError{q.empty() ? "--q-range" : "--q", "|q| must not exceed " + format_number(lim.q_max)};
      }
    }
    return qs;
  }
};

struct Output {
  json doc;
  io::Table table;
  int status = Exit::ok;
};

void emit(const Common& c, const Output& out) {
  std::string fmt = c.format;
  if (fmt.empty()) fmt = c.output.empty() && isatty(fileno(stdout)) ? "table" : "json";
  std::string text;
  if (fmt == "json") {
    text = out.doc.dump(2) + "\n";
  } else if (fmt == "csv") {
    text = out.table.csv();
  } else {
    text = out.table.text();
  }
  if (c.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw UsageError{"--output", "cannot open '" + c.output + "' for writing"};
  f << text;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------------------

struct EvalArgs {
  QSpec q;
  std::string x, x_range, x_im = "0", route = "auto";
  int dx = 0, dq = 0;
};

Output run_eval(const Common& c, const EvalArgs& a) {
  const std::vector<double> qs = a.q.values(c.lim);
  std::vector<double> xs;
  if (!a.x.empty()) xs.push_back(parse_double("--x", a.x));
  if (!a.x_range.empty()) xs = parse_range("--x-range", a.x_range).points();
  if (xs.empty()) throw UsageError{"--x", "one of --x or --x-range is required"};
  const double im = parse_double("--x-im", a.x_im);
  const Route route = a.route == "series" ? Route::series : a.route == "product" ? Route::product : Route::automatic;
  if (route != Route::automatic && (a.dx || a.dq)) throw UsageError{"--route", "derivatives are evaluated by the series"};

  Output out;
  out.doc["command"] = "eval";
  out.doc["tol"] = c.tol;
  out.doc["dx"] = a.dx;
  out.doc["dq"] = a.dq;
  out.table.header = {"q", "x_re", "x_im", "value_re", "value_im", "err", "sign"};
  json results = json::array();
  for (double q : qs) {
    for (double x : xs) {
      const complex z(x, im);
      const CertifiedValue v = (a.dx || a.dq) ? theta_derivative(q, z, a.dx, a.dq, c.tol, c.lim)
                                              : theta_value(q, z, c.tol, route, c.lim);
      const int sign = v.imag() == 0.0 ? v.certified_sign() : 0;
      json r{{"q", q}, {"x_re", x}, {"x_im", im}, {"value", io::to_json(v)}, {"certified_sign", sign}};
      results.push_back(std::move(r));
      out.table.add({format_number(q), format_number(x), format_number(im), format_number(v.real()),
                     format_number(v.imag()), format_number(v.err), std::to_string(sign)});
    }
  }
  out.doc["results"] = std::move(results);
  return out;
}

// ---------------------------------------------------------------------------

struct ZerosArgs {
  QSpec q;
  std::string x_min = "-100", x_max = "100";
  bool complex_search = false;
  int truncation = 0;
};

void zero_rows(io::Table& t, const std::vector<ZeroRecord>& zs) {
  for (const auto& z : zs) {
    t.add({format_number(z.q), to_string(z.kind), io::optional_index(z.index), format_number(z.x.real()),
           format_number(z.x.imag()), std::to_string(z.multiplicity), format_number(z.residual), format_number(z.err)});
  }
}

Output run_zeros(const Common& c, const ZerosArgs& a) {
  const std::vector<double> qs = a.q.values(c.lim);
  Output out;
  out.doc["command"] = "zeros";
  out.doc["tol"] = c.tol;
  out.table.header = {"q", "kind", "index", "re", "im", "multiplicity", "residual", "err"};
  json results = json::array();
  for (double q : qs) {
    json r;
    r["q"] = q;
    if (a.complex_search) {
      ComplexSearchOptions opt;
      if (a.truncation > 0) opt.truncation = a.truncation;
      const ZeroSearch s = search_zeros(q, c.tol, opt, c.lim);
      r["region"] = s.region;
      r["real_count"] = s.real_count;
      r["pair_count"] = s.pair_count;
      r["winding"] = s.winding;
      r["degree"] = s.degree;
      r["coverage_incomplete"] = s.coverage_incomplete;
      json zs = json::array();
      for (const auto& z : s.zeros) zs.push_back(io::to_json(z));
      r["zeros"] = std::move(zs);
      zero_rows(out.table, s.zeros);
    } else {
      if (a.truncation > 0) throw UsageError{"--truncation", "only meaningful with --complex"};
      const double lo = parse_double("--x-min", a.x_min), hi = parse_double("--x-max", a.x_max);
      if (!(lo < hi)) throw UsageError{"--x-min", "must be below --x-max"};
      const auto zs = real_zeros(q, lo, hi, c.tol, c.lim);
      r["x_min"] = lo;
      r["x_max"] = hi;
      json arr = json::array();
      for (const auto& z : zs) arr.push_back(io::to_json(z));
      r["zeros"] = std::move(arr);
      zero_rows(out.table, zs);
    }
    results.push_back(std::move(r));
  }
  out.doc["results"] = std::move(results);
  return out;
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
  std::string which;
  int k = 0, k_max = 0;
};

Output run_spectrum(const Common& c, const SpectrumArgs& a) {
  if (a.k && a.k_max) throw UsageError{"--k", "give --k or --k-max, not both"};
  const int k0 = a.k ? a.k : 1, k1 = a.k ? a.k : (a.k_max ? a.k_max : 1);
  if (k0 < 1 || k1 > 6) throw UsageError{a.k ? "--k" : "--k-max", "k must lie in [1, 6]"};
  const Case which = a.which == "A" ? Case::A : Case::B;
  Output out;
  out.doc["command"] = "spectrum";
  out.doc["case"] = a.which;
  out.doc["tol"] = c.tol;
  out.table.header = {"case", "k", "q_star", "y", "character", "residual_theta", "residual_theta_x"};
  json results = json::array();
  for (int k = k0; k <= k1; ++k) {
    const SpectralPoint p = which == Case::A ? spectral_point_A(k, c.tol, c.lim) : spectral_point_B(k, c.tol, c.lim);
    results.push_back(io::to_json(p));
    out.table.add({to_string(p.which), std::to_string(p.k), format_number(p.q_star), format_number(p.y),
                   to_string(p.character), format_number(p.residual_theta), format_number(p.residual_theta_x)});
  }
  out.doc["results"] = std::move(results);
  return out;
}

// ---------------------------------------------------------------------------

struct SeparateArgs {
  QSpec q;
  std::string line;
};

Output run_separate(const Common& c, const SeparateArgs& a) {
  const std::vector<double> qs = a.q.values(c.lim);
  Output out;
  out.doc["command"] = "separate";
  out.doc["tol"] = c.tol;
  out.table.header = {"q", "kind", "a", "line", "epsilon", "margin", "degenerate", "left", "right"};
  json results = json::array();
  for (double q : qs) {
    std::vector<LineKind> kinds;
    if (a.line.empty()) {
      if (q > 0.0) kinds = {LineKind::separating};
      else if (q < 0.0) kinds = {LineKind::left, LineKind::right};
    } else {
      kinds = {a.line == "separating" ? LineKind::separating : a.line == "left" ? LineKind::left : LineKind::right};
    }
    if (kinds.empty()) throw UsageError{"--q", "no separating line is defined at q = 0"};
    for (LineKind k : kinds) {
      if ((k == LineKind::separating) != (q > 0.0)) {
        throw UsageError{"--line", std::string(to_string(k)) + " line needs q " + (q > 0.0 ? "< 0" : "> 0")};
      }
      const SeparationResult r = k == LineKind::separating ? separating_line_A(q, c.tol, {}, c.lim)
                                 : k == LineKind::left     ? left_separating_line_B(q, c.tol, {}, c.lim)
                                                           : right_separating_line_B(q, c.tol, {}, c.lim);
      results.push_back(io::to_json(r));
      out.table.add({format_number(q), to_string(r.kind), format_number(r.a), format_number(r.line()),
                     format_number(r.epsilon), format_number(r.margin), yes_no(r.degenerate),
                     std::to_string(r.left.size()), std::to_string(r.right.size())});
    }
  }
  out.doc["results"] = std::move(results);
  return out;
}

// ---------------------------------------------------------------------------

struct TraceArgs {
  std::string q_range, index = "1,2", x_min = "-1000", x_max = "1000";
};

ZeroRecord seed(double q, int index, double lo, double hi, double tol, const Limits& lim) {
  for (const auto& z : real_zeros(q, lo, hi, tol, lim)) {
    if (z.index == index) return z;
  }
  fail(ErrorKind::seed_failure, "no real zero with index " + std::to_string(index) + " at q = " + format_number(q));
}

Output run_trace(const Common& c, const TraceArgs& a) {
  if (a.q_range.empty()) throw UsageError{"--q-range", "trace needs --q-range lo:hi:steps"};
  const Range r = parse_range("--q-range", a.q_range);
  for (double v : {r.lo, r.hi}) {
    if (!(std::fabs(v) <= c.lim.q_max)) throw UsageError{"--q-range", "|q| must not exceed " + format_number(c.lim.q_max)};
  }
  if (r.lo == r.hi || (r.lo < 0.0) != (r.hi < 0.0) || r.lo == 0.0 || r.hi == 0.0) {
    throw UsageError{"--q-range", "the range must be nondegenerate and stay on one side of q = 0"};
  }
  const std::vector<int> idx = parse_int_list("--index", a.index);
  if (idx.empty() || idx.size() > 2) throw UsageError{"--index", "give one or two zero indices"};
  const double lo = parse_double("--x-min", a.x_min), hi = parse_double("--x-max", a.x_max);
  if (!(lo < hi)) throw UsageError{"--x-min", "must be below --x-max"};

  TrackOptions opt;
  opt.max_step = std::fabs(r.hi - r.lo) / r.steps;
  opt.tol = std::max(c.tol, 1e-13);
  opt.lim = c.lim;
  std::vector<Trajectory> paths;
  std::optional<double> collision;
  if (idx.size() == 1) {
    paths.push_back(track_zero(seed(r.lo, idx[0], lo, hi, c.tol, c.lim), r.hi, opt));
  } else {
    const PairTrajectory p =
        track_pair(seed(r.lo, idx[0], lo, hi, c.tol, c.lim), seed(r.lo, idx[1], lo, hi, c.tol, c.lim), r.hi, opt);
    paths = {p.first, p.second};
    collision = p.collision_q;
  }

  Output out;
  out.doc["command"] = "trace";
  out.doc["q_from"] = r.lo;
  out.doc["q_to"] = r.hi;
  out.doc["max_step"] = opt.max_step;
  out.doc["collision_q"] = collision ? json(*collision) : json(nullptr);
  out.table.header = {"step", "q", "index", "re", "im", "collision"};
  json trajs = json::array();
  for (std::size_t i = 0; i < paths.size(); ++i) {
    json pts = json::array();
    const Trajectory& t = paths[i];
    for (std::size_t s = 0; s < t.points.size(); ++s) {
      const bool last = s + 1 == t.points.size();
      pts.push_back(json{{"q", t.q_grid[s]}, {"re", t.points[s].real()}, {"im", t.points[s].imag()}});
      out.table.add({std::to_string(s), format_number(t.q_grid[s]), std::to_string(idx[i]),
                     format_number(t.points[s].real()), format_number(t.points[s].imag()),
                     yes_no(last && collision.has_value())});
    }
    trajs.push_back(json{{"index", idx[i]}, {"near_double", t.near_double}, {"points", std::move(pts)}});
  }
  out.doc["trajectories"] = std::move(trajs);
  return out;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  int grid = 200;
  std::string margin = "0";
};

Output run_verify(const Common& c, const VerifyArgs& a) {
  ClaimConfig cfg;
  cfg.grid = a.grid;
  if (a.grid < 10 || a.grid > 5000) throw UsageError{"--grid", "grid must lie in [10, 5000]"};
  cfg.case_a = a.suite != "B";
  cfg.case_b = a.suite != "A";
  cfg.margin_required = parse_double("--margin", a.margin);
  if (cfg.margin_required < 0.0) throw UsageError{"--margin", "must be nonnegative"};
  cfg.lim = c.lim;
  const std::vector<ClaimReport> reports = run_all(cfg);

  Output out;
  out.doc["command"] = "verify";
  out.doc["suite"] = a.suite;
  out.doc["grid"] = a.grid;
  out.doc["scale"] = "grid certification at sampled nodes";
  out.table.header = {"id", "status", "worst_q", "worst_x", "worst_margin", "nodes", "notes"};
  json arr = json::array();
  int verified = 0, violated = 0, indeterminate = 0, skipped = 0;
  for (const ClaimReport& r : reports) {
    arr.push_back(io::to_json(r));
    out.table.add({r.id, to_string(r.status), format_number(r.worst_q), format_number(r.worst_x),
                   format_number(r.worst_margin), std::to_string(r.nodes), r.notes});
    switch (r.status) {
      case ClaimStatus::verified: ++verified; break;
      case ClaimStatus::violated: ++violated; break;
      case ClaimStatus::indeterminate: ++indeterminate; break;
      case ClaimStatus::skipped: ++skipped; break;
    }
  }
  out.doc["summary"] =
      json{{"verified", verified}, {"violated", violated}, {"indeterminate", indeterminate}, {"skipped", skipped}};
  out.doc["claims"] = std::move(arr);
  out.status = violated ? Exit::violated : indeterminate ? Exit::numerical : Exit::ok;
  return out;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "json, csv or table (default: table on a terminal, json otherwise)")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  sub->add_option("--output", c.output, "write to this file instead of standard output");
  sub->add_option("--tol", c.tol_text, "absolute tolerance in [1e-15, 1e-3] (default 1e-12)");
}

void add_q(CLI::App* sub, QSpec& q) {
  auto* one = sub->add_option("--q", q.q, "parameter q");
  auto* many = sub->add_option("--q-range", q.q_range, "grid lo:hi:steps");
  one->excludes(many);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified evaluation, zeros and spectral data of the partial theta function"};
  app.require_subcommand(1);
  app.allow_windows_style_options(false);

  Common common;
  EvalArgs eval;
  ZerosArgs zeros;
  SpectrumArgs spectrum;
  SeparateArgs separate;
  TraceArgs trace;
  VerifyArgs verify;

  auto* e = app.add_subcommand("eval", "certified value of theta or one of its derivatives");
  add_common(e, common);
  add_q(e, eval.q);
  e->add_option("--x", eval.x, "real part of x")->excludes(e->add_option("--x-range", eval.x_range, "grid lo:hi:steps"));
  e->add_option("--x-im", eval.x_im, "imaginary part of x (default 0)");
  e->add_option("--route", eval.route, "auto, series or product")->check(CLI::IsMember({"auto", "series", "product"}));
  e->add_option("--dx", eval.dx, "order of the x derivative, 0..4")->check(CLI::Range(0, 4));
  e->add_option("--dq", eval.dq, "order of the q derivative, 0..2")->check(CLI::Range(0, 2));

  auto* z = app.add_subcommand("zeros", "real zeros in an interval, or all zeros in the search disk");
  add_common(z, common);
  add_q(z, zeros.q);
  z->add_option("--x-min", zeros.x_min, "left end of the real interval (default -100)");
  z->add_option("--x-max", zeros.x_max, "right end of the real interval (default 100)");
  z->add_flag("--complex", zeros.complex_search, "search the complex disk as well");
  z->add_option("--truncation", zeros.truncation, "use the degree-N partial sum")->check(CLI::Range(1, 2000));

  auto* s = app.add_subcommand("spectrum", "spectral values where a double zero occurs");
  add_common(s, common);
  s->add_option("--case", spectrum.which, "A (q > 0) or B (q < 0)")->required()->check(CLI::IsMember({"A", "B"}));
  s->add_option("--k", spectrum.k, "index of the spectral value");
  s->add_option("--k-max", spectrum.k_max, "compute k = 1..k-max");

  auto* p = app.add_subcommand("separate", "separating lines between real and complex zeros");
  add_common(p, common);
  add_q(p, separate.q);
  p->add_option("--line", separate.line, "separating (q > 0), left or right (q < 0)")
      ->check(CLI::IsMember({"separating", "left", "right"}));

  auto* t = app.add_subcommand("trace", "follow one or two real zeros in q");
  add_common(t, common);
  t->add_option("--q-range", trace.q_range, "from:to:steps; steps sets the largest q step")->required();
  t->add_option("--index", trace.index, "zero indices, e.g. 1,2 (default)");
  t->add_option("--x-min", trace.x_min, "seed search interval, left end (default -1000)");
  t->add_option("--x-max", trace.x_max, "seed search interval, right end (default 1000)");

  auto* v = app.add_subcommand("verify", "run the named claim suite");
  add_common(v, common);
  v->add_option("--suite", verify.suite, "all, A or B")->check(CLI::IsMember({"all", "A", "B"}));
  v->add_option("--grid", verify.grid, "nodes per dimension (default 200)");
  v->add_option("--margin", verify.margin, "extra margin demanded of box claims (default 0)");

  const std::vector<std::string> commands{"eval", "zeros", "spectrum", "separate", "trace", "verify"};
  if (argc > 1 && argv[1][0] != '-' && std::find(commands.begin(), commands.end(), argv[1]) == commands.end()) {
    std::cerr << "usage error: unknown command '" << argv[1] << "' (eval, zeros, spectrum, separate, trace, verify)\n";
    return Exit::usage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return Exit::usage;
  }

  try {
    common.tol = parse_double("--tol", common.tol_text);
    if (!(common.tol >= 1e-15 && common.tol <= 1e-3)) throw UsageError{"--tol", "must lie in [1e-15, 1e-3]"};
    Output out;
    if (e->parsed()) out = run_eval(common, eval);
    else if (z->parsed()) out = run_zeros(common, zeros);
    else if (s->parsed()) out = run_spectrum(common, spectrum);
    else if (p->parsed()) out = run_separate(common, separate);
    else if (t->parsed()) out = run_trace(common, trace);
    else out = run_verify(common, verify);
    emit(common, out);
    return out.status;
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.flag << ": " << err.message << "\n";
    return Exit::usage;
  } catch (const NumericError& err) {
    std::cerr << "numerical failure: " << err.what() << "\n";
    return Exit::numerical;
  }
}
