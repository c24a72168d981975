#include "bfev/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "bfev/biconv.hpp"
#include "bfev/copulas.hpp"
#include "bfev/extremes.hpp"
#include "bfev/family_spec.hpp"
#include "bfev/format.hpp"
#include "bfev/gaussian.hpp"

namespace bfev {

namespace {

constexpr double kMonotoneSlack = 1e-12;

// Typed access to an experiment parameter object; every key must be consumed.
class Params {
 public:
  Params(const Json& j, std::string ctx) : j_(j), ctx_(std::move(ctx)) {
    if (!j_.is_object()) throw std::invalid_argument(ctx_ + ": parameters must be a JSON object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double num(const std::string& key, double fallback) {
    if (!take(key)) return fallback;
    return number_from_json(j_.at(key));
  }

  long long integer(const std::string& key, long long fallback) {
    const double v = num(key, static_cast<double>(fallback));
    if (v != std::floor(v) || std::abs(v) > 9e15)
      throw std::invalid_argument(ctx_ + ": '" + key + "' must be an integer");
    return static_cast<long long>(v);
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!take(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_string()) throw std::invalid_argument(ctx_ + ": '" + key + "' must be a string");
    return v.get<std::string>();
  }

  std::string required_text(const std::string& key) {
    if (!has(key)) throw std::invalid_argument(ctx_ + ": missing parameter '" + key + "'");
    return text(key, {});
  }

  std::vector<double> list(const std::string& key, std::vector<double> fallback) {
    if (!take(key)) return fallback;
    const Json& v = j_.at(key);
    if (v.is_string()) return parse_number_list(v.get<std::string>());
    if (!v.is_array()) throw std::invalid_argument(ctx_ + ": '" + key + "' must be a list");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(number_from_json(e));
    return out;
  }

  std::vector<long long> ns(const std::string& key, std::vector<long long> fallback) {
    if (!has(key)) {
      take(key);
      return fallback;
    }
    std::vector<long long> out;
    for (double v : list(key, {})) {
      if (!(v >= 1.0) || v != std::floor(v))
        throw std::invalid_argument(ctx_ + ": '" + key + "' entries must be integers >= 1");
      out.push_back(static_cast<long long>(v));
    }
    if (out.empty()) throw std::invalid_argument(ctx_ + ": '" + key + "' is empty");
    return out;
  }

  const Json& raw(const std::string& key) {
    take(key);
    return j_.at(key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key()))
        throw std::invalid_argument(ctx_ + ": unknown parameter '" + it.key() + "'");
  }

 private:
  bool take(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }

  const Json& j_;
  std::string ctx_;
  std::set<std::string> used_;
};

std::size_t grid_size(Params& p, long long fallback) {
  const long long g = p.integer("grid", fallback);
  if (g < 2 || g > 100000) throw std::invalid_argument("grid must lie in [2, 100000]");
  return static_cast<std::size_t>(g);
}

// Quantiles of F at evenly spaced interior levels.
std::vector<double> quantile_knots(const UnivariateDF& F, std::size_t n, double lo = 0.05,
                                   double hi = 0.95) {
  std::vector<double> out;
  for (double level : linspace(lo, hi, n)) out.push_back(quantile(F, level));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

GEVParams extreme_params(const std::string& spec) {
  auto p = extreme_type_params(spec);
  if (!p)
    throw std::invalid_argument("'" + spec +
                                "' is not an extreme type (exponential, pareto, beta, free-gev, gev)");
  return *p;
}

ExperimentReport compound_poisson(Params& p) {
  const double lambda = p.num("lambda", 0.5);
  DiscreteMeasure nu({{{1.0, 1.0}, 1.0}});
  if (p.has("nu")) {
    const Json& j = p.raw("nu");
    nu = j.is_string() ? parse_measure(j.get<std::string>()) : measure_from_json(j);
  }
  const auto corner = p.list("p", {0.0, 0.0});
  if (corner.size() != 2) throw std::invalid_argument("compound-poisson: p needs two coordinates");
  const long long kmax = p.integer("kmax", 10);
  if (kmax < 1 || kmax > 40) throw std::invalid_argument("compound-poisson: kmax must lie in [1, 40]");
  p.finish();
  const auto res = compound_poisson_limit(lambda, nu, {corner[0], corner[1]}, static_cast<int>(kmax));
  ExperimentReport r{"compound-poisson", {}, Json::object()};
  for (const auto& row : res.ladder) r.rows.push_back({row.n, "sup_distance", row.distance});
  r.extra["L"] = {number_to_json(res.L.x), number_to_json(res.L.y)};
  return r;
}

ExperimentReport doa_copula(Params& p) {
  const Copula C = parse_copula(p.required_text("copula"));
  std::optional<Copula> target;
  if (p.has("target")) {
    target = parse_copula(p.text("target", {}));
  } else if (C.family() == Copula::Family::ev_from_pickands) {
    target = C;
  } else if (C.pickands()) {
    target = ev_copula(*C.pickands());
  } else {
    throw std::invalid_argument("doa-copula: '" + C.spec() + "' needs an explicit target copula");
  }
  const long long n = p.integer("n", 10000);
  if (n < 1) throw std::invalid_argument("doa-copula: n must be >= 1");
  std::vector<long long> fallback;
  for (long long k = 10; k < n; k *= 10) fallback.push_back(k);
  fallback.push_back(n);
  const auto ns = p.ns("ns", fallback);
  const auto g = grid_size(p, 21);
  p.finish();
  const ProbeGrid probe{linspace(0.0, 1.0, g), linspace(0.0, 1.0, g)};
  ExperimentReport r{"doa-copula", {}, Json::object()};
  for (long long k : ns) r.rows.push_back({k, "sup_distance", doa_distance(C, *target, k, probe)});
  r.extra["copula"] = C.spec();
  r.extra["target"] = target->spec();
  return r;
}

struct EvSetup {
  PickandsFn A;
  GEVParams p1, p2;
  UnivariateDF F1, F2;
  ProbeGrid probe;
};

EvSetup ev_setup(Params& p, std::size_t default_grid) {
  const PickandsFn A = parse_pickands(p.required_text("pickands"));
  const std::string m1 = p.required_text("marginal");
  const std::string m2 = p.text("marginal2", m1);
  const auto g = grid_size(p, static_cast<long long>(default_grid));
  const GEVParams p1 = extreme_params(m1), p2 = extreme_params(m2);
  UnivariateDF F1 = free_gev(p1), F2 = free_gev(p2);
  ProbeGrid probe{quantile_knots(F1, g), quantile_knots(F2, g)};
  return {A, p1, p2, std::move(F1), std::move(F2), std::move(probe)};
}

ExperimentReport max_stable(Params& p) {
  auto s = ev_setup(p, 21);
  const auto ns = p.ns("ns", {2, 5, 10});
  p.finish();
  const BivariateDF F = bifree_ev(s.F1, s.F2, s.A, s.probe);
  const auto seq = NormalizingSequence::from_gev(s.p1, s.p2);
  ExperimentReport r{"max-stable", {}, Json::object()};
  for (const auto& row : check_max_stable(F, seq, ns, s.probe))
    r.rows.push_back({row.n, "max_stable_distance", row.distance});
  double q_err = 0.0;
  for (const auto& pt : s.probe.points()) {
    if (!(F(pt) > 0.0)) continue;
    q_err = std::max(q_err, std::abs(transform_Q(F, pt) - f_from_pickands(s.A, s.F1(pt.x), s.F2(pt.y))));
  }
  r.extra["q_identity_error"] = number_to_json(q_err);
  return r;
}

ExperimentReport doa(Params& p) {
  auto s = ev_setup(p, 11);
  const auto ns = p.ns("ns", {10, 100, 1000, 10000});
  p.finish();
  const UnivariateDF G1 = gev_df(s.p1), G2 = gev_df(s.p2);
  const BivariateDF G = classical_mev(G1, G2, s.A, s.probe);
  const BivariateDF F = bifree_ev(s.F1, s.F2, s.A, s.probe);
  const auto seq = NormalizingSequence::from_gev(s.p1, s.p2);
  ExperimentReport r{"doa", {}, Json::object()};
  for (auto& row : doa_experiment(G, seq, G, F, ns, s.probe))
    r.rows.push_back({row.n, row.diagnostic, row.value});
  return r;
}

// ---------------------------------------------------------------------------

struct Globals {
  std::optional<double> tol;
  std::optional<long long> grid;
  std::string out_dir;
  std::string format;  // empty = subcommand default
};

std::string resolve(const Globals& g, const std::string& path) {
  if (g.out_dir.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(g.out_dir) / path).string();
}

void ensure_out_dir(const Globals& g) {
  if (!g.out_dir.empty()) std::filesystem::create_directories(g.out_dir);
}

// Writes to `path` (under --out-dir) or to `out` when no path is given.
void emit(const Globals& g, std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty()) {
    out << text;
    return;
  }
  ensure_out_dir(g);
  write_text_file(resolve(g, path), text);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string surface_csv(const Surface& s) {
  std::ostringstream os;
  write_surface_csv(os, s);
  return os.str();
}

Json surface_json(const Surface& s) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < s.xs.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < s.ys.size(); ++j) row.push_back(number_to_json(s.at(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"xs", s.xs}, {"ys", s.ys}, {"values", rows}};
}

Surface df_surface(const BivariateDF& F) {
  Surface s;
  s.xs.assign(F.xknots().begin(), F.xknots().end());
  s.ys.assign(F.yknots().begin(), F.yknots().end());
  for (std::size_t i = 0; i < F.nx(); ++i)
    for (std::size_t j = 0; j < F.ny(); ++j) s.values.push_back(F.value(i, j));
  return s;
}

std::string univariate_csv(const UnivariateDF& F, const std::vector<double>& knots) {
  std::string s = "x,value\n";
  for (double x : knots) s += format_double(x) + "," + format_double(F(x)) + "\n";
  return s;
}

std::string marginal_summary(const BivariateDF& F) {
  std::string s;
  for (int j = 1; j <= 2; ++j) {
    const auto& m = F.marginal(j);
    s += "marginal" + std::to_string(j) + ": L=" + format_double(m.lower()) +
         " upper=" + format_double(m.upper()) + "\n";
  }
  return s;
}

int exit_for(Status s) {
  switch (s) {
    case Status::yes:
      return exit_yes;
    case Status::no:
      return exit_no;
    case Status::inconclusive:
      return exit_inconclusive;
  }
  return exit_input_error;
}

double parse_corr(const std::string& text) {
  const std::string v = text.rfind("c=", 0) == 0 ? text.substr(2) : text;
  const double c = parse_number(v);
  if (!(c >= -1.0 && c <= 1.0)) throw std::invalid_argument("correlation c must lie in [-1, 1]");
  return c;
}

std::size_t global_grid(const Globals& g, std::size_t fallback) {
  if (!g.grid) return fallback;
  if (*g.grid < 2) throw std::invalid_argument("--grid must be >= 2");
  return static_cast<std::size_t>(*g.grid);
}

bool want_csv(const Globals& g, bool csv_default) {
  return g.format.empty() ? csv_default : g.format == "csv";
}

int write_report(const Globals& g, std::ostream& out, const ExperimentReport& r) {
  const Json summary = report_summary(r);
  if (want_csv(g, true)) {
    if (g.out_dir.empty()) {
      out << report_csv(r);
    } else {
      emit(g, out, r.experiment + ".csv", report_csv(r));
      emit(g, out, r.experiment + ".summary.json", dump(summary));
      out << dump(summary);
    }
    return exit_yes;
  }
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.n}, {"diagnostic", row.diagnostic}, {"value", number_to_json(row.value)}});
  emit(g, out, g.out_dir.empty() ? "" : r.experiment + ".json",
       dump(Json{{"rows", rows}, {"summary", summary}}));
  if (!g.out_dir.empty()) out << dump(summary);
  return exit_yes;
}

}  // namespace

ExperimentReport run_experiment(const std::string& name, const Json& params) {
  Params p(params, name);
  if (name == "compound-poisson") return compound_poisson(p);
  if (name == "doa-copula") return doa_copula(p);
  if (name == "max-stable") return max_stable(p);
  if (name == "doa") return doa(p);
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::string report_csv(const ExperimentReport& r) {
  std::string s = "n,diagnostic,value\n";
  for (const auto& row : r.rows)
    s += std::to_string(row.n) + "," + row.diagnostic + "," + format_double(row.value) + "\n";
  return s;
}

Json report_summary(const ExperimentReport& r) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const ReportRow*>> series;
  for (const auto& row : r.rows) {
    if (!series.count(row.diagnostic)) order.push_back(row.diagnostic);
    series[row.diagnostic].push_back(&row);
  }
  Json list = Json::array();
  for (const auto& d : order) {
    const auto& rows = series[d];
    std::size_t start = rows.size() - 1;
    while (start > 0 && rows[start]->value <= rows[start - 1]->value + kMonotoneSlack) --start;
    list.push_back({{"diagnostic", d},
                    {"final", number_to_json(rows.back()->value)},
                    {"monotone_decrease", start == 0},
                    {"monotone_from", rows[start]->n}});
  }
  Json s{{"experiment", r.experiment}, {"series", list}};
  if (!list.empty()) {
    s["final"] = list[0]["final"];
    s["monotone_decrease"] = list[0]["monotone_decrease"];
  }
  for (auto it = r.extra.begin(); it != r.extra.end(); ++it) s[it.key()] = it.value();
  return s;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bi-free extreme value toolkit", "bfev"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  double tol_value = 0.0;
  long long grid_value = 0;
  auto* tol_opt = app.add_option("--tol", tol_value, "Numerical tolerance override");
  auto* grid_opt = app.add_option("--grid", grid_value, "Probe grid / resolution override");
  app.add_option("--out-dir", g.out_dir, "Directory for written artifacts");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  // convolve
  auto* convolve = app.add_subcommand("convolve", "Free or bi-free max-convolution");
  bool use_bifree = false, use_free = false;
  std::string conv_a, conv_b, conv_out;
  auto* f_bifree = convolve->add_flag("--bifree", use_bifree, "Bivariate DFs");
  auto* f_free = convolve->add_flag("--free", use_free, "Univariate DFs");
  f_bifree->excludes(f_free);
  convolve->add_option("A", conv_a, "First DF (file, @file or spec)")->required();
  convolve->add_option("B", conv_b, "Second DF")->required();
  convolve->add_option("-o,--output", conv_out, "Output file");

  // power
  auto* power = app.add_subcommand("power", "Bi-free (or free) power F^(t)");
  std::string pow_f, pow_out;
  double pow_t = 1.0;
  bool pow_free = false;
  power->add_option("F", pow_f, "DF")->required();
  power->add_option("t", pow_t, "Exponent t >= 0")->required();
  power->add_flag("--free", pow_free, "Univariate DF");
  power->add_option("-o,--output", pow_out, "Output file");

  // transform
  auto* transform = app.add_subcommand("transform", "T or Q transform surface");
  std::string tr_which, tr_f, tr_out;
  transform->add_option("which", tr_which, "T or Q")->required()->check(CLI::IsMember({"T", "Q"}));
  transform->add_option("F", tr_f, "Bivariate DF")->required();
  transform->add_option("-o,--output", tr_out, "Output file");

  // check
  auto* check = app.add_subcommand("check", "Membership checks with JSON verdicts");
  check->require_subcommand(1);
  auto* ck_copula = check->add_subcommand("copula", "Bi-free copula membership");
  std::string ck_spec, ck_mode = "grid";
  ck_copula->add_option("spec", ck_spec, "Copula family spec")->required();
  ck_copula->add_option("--mode", ck_mode, "grid or smooth")->check(CLI::IsMember({"grid", "smooth"}));
  auto* ck_maxid = check->add_subcommand("maxid", "Bi-free max-infinite divisibility");
  std::string ck_df, ck_gauss;
  auto* ck_df_opt = ck_maxid->add_option("F", ck_df, "Bivariate DF");
  auto* ck_g_opt = ck_maxid->add_option("--gaussian", ck_gauss, "Bi-free Gaussian, c=<corr>");
  ck_df_opt->excludes(ck_g_opt);
  auto* ck_classical = check->add_subcommand("classical", "F^(1/n) quasi-monotone");
  std::string ck_cl_df;
  int ck_n = 2;
  ck_classical->add_option("F", ck_cl_df, "Bivariate DF")->required();
  ck_classical->add_option("--n", ck_n, "Root order n >= 1");
  auto* ck_axioms = check->add_subcommand("axioms", "Copula axioms on a probe grid");
  std::string ck_ax_spec;
  ck_axioms->add_option("spec", ck_ax_spec, "Copula family spec")->required();

  // build
  auto* build = app.add_subcommand("build", "Construct a bivariate DF");
  build->require_subcommand(1);
  auto* b_exp = build->add_subcommand("exponent", "From a discrete exponent measure");
  std::string b_measure, b_L = "0,0", b_out;
  b_exp->add_option("measure", b_measure, "Measure file or dirac:x,y")->required();
  b_exp->add_option("--L", b_L, "Lower corner x,y");
  b_exp->add_option("-o,--output", b_out, "Output file");
  auto* b_cop = build->add_subcommand("copula", "Copula coupled with marginals");
  std::string b_cspec, b_cout;
  std::vector<std::string> b_margs;
  b_cop->add_option("spec", b_cspec, "Copula family spec")->required();
  b_cop->add_option("--marginals", b_margs, "Two marginal specs")->expected(2)->required();
  b_cop->add_option("-o,--output", b_cout, "Output file");

  // gaussian
  auto* gauss = app.add_subcommand("gaussian", "Bi-free Gaussian law");
  gauss->require_subcommand(1);
  std::string g_c;
  double g_x = 0.0;
  std::string g_out;
  auto add_c = [&](CLI::App* sub) {
    sub->add_option("c", g_c, "Correlation, c=<value> or <value>")->required();
    sub->add_option("-o,--output", g_out, "Output file");
  };
  auto* g_density = gauss->add_subcommand("density", "Density surface");
  auto* g_cdf = gauss->add_subcommand("cdf", "DF surface");
  auto* g_verdict = gauss->add_subcommand("verdict", "Max-i.d. verdict");
  auto* g_identity = gauss->add_subcommand("identity", "Quadrature identity at x");
  for (auto* s : {g_density, g_cdf, g_verdict, g_identity}) add_c(s);
  g_identity->add_option("--x", g_x, "Point in [-2, 2]");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Convergence experiments");
  experiment->require_subcommand(1);
  Json ex_params = Json::object();
  std::string ex_name;
  struct Bind {
    CLI::App* sub;
    CLI::Option* opt;
    std::string key;
    std::string value;
  };
  std::vector<std::unique_ptr<Bind>> binds;
  auto bind = [&](CLI::App* sub, const std::string& flag, const std::string& key, bool positional) {
    auto b = std::make_unique<Bind>();
    b->key = key;
    b->sub = sub;
    b->opt = sub->add_option(positional ? key : "--" + flag, b->value, key);
    if (positional) b->opt->required();
    binds.push_back(std::move(b));
  };
  auto* ex_cp = experiment->add_subcommand("compound-poisson", "Compound Poisson ladder");
  bind(ex_cp, "lambda", "lambda", false);
  bind(ex_cp, "nu", "nu", false);
  bind(ex_cp, "p", "p", false);
  bind(ex_cp, "kmax", "kmax", false);
  auto* ex_dc = experiment->add_subcommand("doa-copula", "Copula iteration distance");
  bind(ex_dc, "", "copula", true);
  bind(ex_dc, "n", "n", false);
  bind(ex_dc, "ns", "ns", false);
  bind(ex_dc, "target", "target", false);
  auto* ex_ms = experiment->add_subcommand("max-stable", "Bi-free max-stability distances");
  auto* ex_doa = experiment->add_subcommand("doa", "Classical and bi-free attraction");
  for (auto* s : {ex_ms, ex_doa}) {
    bind(s, "", "pickands", true);
    bind(s, "marginal", "marginal", false);
    bind(s, "marginal2", "marginal2", false);
    bind(s, "ns", "ns", false);
  }
  auto* ex_run = experiment->add_subcommand("run", "Run an experiment from a JSON config");
  std::string ex_config;
  ex_run->add_option("config", ex_config, "Config file {experiment, ...}")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_yes : exit_input_error;
  }
  if (tol_opt->count()) g.tol = tol_value;
  if (grid_opt->count()) g.grid = grid_value;

  try {
    if (convolve->parsed()) {
      if (!use_bifree && !use_free) throw std::invalid_argument("convolve: pass --bifree or --free");
      if (use_free) {
        const auto H = free_maxconv(parse_marginal(conv_a), parse_marginal(conv_b));
        const auto knots = default_knots(H, global_grid(g, 101));
        emit(g, out, conv_out,
             want_csv(g, false) ? univariate_csv(H, knots) : dump(to_json(H, knots)));
        if (!conv_out.empty())
          out << "marginal: L=" << format_double(H.lower()) << " upper=" << format_double(H.upper())
              << "\n";
        return exit_yes;
      }
      const auto H = bifree_maxconv(parse_bivariate(conv_a), parse_bivariate(conv_b));
      emit(g, out, conv_out, want_csv(g, false) ? surface_csv(df_surface(H)) : dump(to_json(H)));
      if (!conv_out.empty()) out << marginal_summary(H);
      return exit_yes;
    }

    if (power->parsed()) {
      if (pow_free) {
        const auto P = free_power(parse_marginal(pow_f), pow_t);
        const auto knots = default_knots(P, global_grid(g, 101));
        emit(g, out, pow_out, want_csv(g, false) ? univariate_csv(P, knots) : dump(to_json(P, knots)));
        return exit_yes;
      }
      const auto P = bifree_power(parse_bivariate(pow_f), pow_t);
      emit(g, out, pow_out, want_csv(g, false) ? surface_csv(df_surface(P)) : dump(to_json(P)));
      if (!pow_out.empty()) out << marginal_summary(P);
      return exit_yes;
    }

    if (transform->parsed()) {
      const auto F = parse_bivariate(tr_f);
      const Surface s = tr_which == "T" ? transform_T(F) : transform_Q(F);
      emit(g, out, tr_out, want_csv(g, true) ? surface_csv(s) : dump(surface_json(s)));
      return exit_yes;
    }

    if (check->parsed()) {
      if (ck_axioms->parsed()) {
        const auto rep =
            check_copula_axioms(parse_copula(ck_ax_spec), global_grid(g, 101), g.tol.value_or(1e-9));
        out << dump(Json{{"pass", rep.pass},
                         {"boundary", number_to_json(rep.boundary)},
                         {"min_volume", number_to_json(rep.min_volume)},
                         {"lipschitz", number_to_json(rep.lipschitz)},
                         {"frechet", number_to_json(rep.frechet)}});
        return rep.pass ? exit_yes : exit_no;
      }
      Verdict v;
      if (ck_copula->parsed()) {
        CopulaCheckOptions opts;
        opts.mode = ck_mode == "smooth" ? CopulaCheckMode::smooth : CopulaCheckMode::grid;
        if (g.tol) opts.tol = *g.tol;
        opts.grid = global_grid(g, opts.grid);
        v = check_bifree_copula(parse_copula(ck_spec), opts);
      } else if (ck_maxid->parsed()) {
        if (ck_g_opt->count()) {
          gaussian::VerdictOptions opts;
          if (g.tol) opts.tol = *g.tol;
          opts.resolution = static_cast<int>(global_grid(g, static_cast<std::size_t>(opts.resolution)));
          v = gaussian::maxid_verdict(parse_corr(ck_gauss), opts);
        } else if (ck_df_opt->count()) {
          v = is_bifree_maxid(parse_bivariate(ck_df), g.tol.value_or(1e-9));
        } else {
          throw std::invalid_argument("check maxid: pass a DF file or --gaussian c=<corr>");
        }
      } else {
        v = classical_maxid_check(parse_bivariate(ck_cl_df), ck_n, g.tol.value_or(1e-9));
      }
      out << dump(to_json(v));
      return exit_for(v.status);
    }

    if (build->parsed()) {
      if (b_exp->parsed()) {
        const auto L = parse_number_list(b_L);
        if (L.size() != 2) throw std::invalid_argument("--L needs two coordinates x,y");
        const auto F = from_exponent_measure(parse_measure(b_measure), {L[0], L[1]});
        emit(g, out, b_out, want_csv(g, false) ? surface_csv(df_surface(F)) : dump(to_json(F)));
        if (!b_out.empty()) out << marginal_summary(F);
        return exit_yes;
      }
      const auto m1 = parse_marginal(b_margs.at(0)), m2 = parse_marginal(b_margs.at(1));
      const auto n = global_grid(g, 51);
      const auto F = couple(parse_copula(b_cspec), m1, m2, {default_knots(m1, n), default_knots(m2, n)});
      emit(g, out, b_cout, want_csv(g, false) ? surface_csv(df_surface(F)) : dump(to_json(F)));
      if (!b_cout.empty()) out << marginal_summary(F);
      return exit_yes;
    }

    if (gauss->parsed()) {
      const double c = parse_corr(g_c);
      if (g_density->parsed()) {
        Surface s;
        s.xs = s.ys = linspace(-2.0, 2.0, global_grid(g, 41));
        for (double x : s.xs)
          for (double y : s.ys) s.values.push_back(gaussian::density(c, x, y));
        emit(g, out, g_out, want_csv(g, true) ? surface_csv(s) : dump(surface_json(s)));
        return exit_yes;
      }
      if (g_cdf->parsed()) {
        const auto F = gaussian::cdf_grid(c, static_cast<int>(global_grid(g, 64)));
        const Surface s = df_surface(F);
        emit(g, out, g_out, want_csv(g, true) ? surface_csv(s) : dump(surface_json(s)));
        return exit_yes;
      }
      if (g_verdict->parsed()) {
        gaussian::VerdictOptions opts;
        if (g.tol) opts.tol = *g.tol;
        opts.resolution = static_cast<int>(global_grid(g, static_cast<std::size_t>(opts.resolution)));
        const auto v = gaussian::maxid_verdict(c, opts);
        emit(g, out, g_out, dump(to_json(v)));
        return exit_for(v.status);
      }
      const auto r = gaussian::identity_check(c, g_x);
      emit(g, out, g_out,
           dump(Json{{"c", c},
                     {"x", g_x},
                     {"value", number_to_json(r.value)},
                     {"reference", number_to_json(r.reference)},
                     {"abs_diff", number_to_json(r.abs_diff)}}));
      return exit_yes;
    }

    if (experiment->parsed()) {
      if (ex_run->parsed()) {
        Json cfg = read_json_file(ex_config);
        if (!cfg.is_object() || !cfg.contains("experiment") || !cfg["experiment"].is_string())
          throw std::invalid_argument("config needs a string field 'experiment'");
        ex_name = cfg["experiment"].get<std::string>();
        cfg.erase("experiment");
        ex_params = std::move(cfg);
      } else {
        for (auto* s : {ex_cp, ex_dc, ex_ms, ex_doa})
          if (s->parsed()) ex_name = s->get_name();
        for (const auto& b : binds)
          if (b->opt->count() && b->sub->parsed()) ex_params[b->key] = b->value;
      }
      if (g.grid && !ex_params.contains("grid")) ex_params["grid"] = *g.grid;
      return write_report(g, out, run_experiment(ex_name, ex_params));
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  }
  return exit_input_error;
}

}  // namespace bfev
