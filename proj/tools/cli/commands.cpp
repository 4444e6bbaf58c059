#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/cli.hpp"
#include "cli/config_file.hpp"
#include "cli/metrics.hpp"
#include "cli/output.hpp"
#include "cli/presets.hpp"
#include "obsblr/obsblr.hpp"

namespace obsblr::cli {
namespace {

struct Globals {
  std::string format = "csv";
  std::string config;
  std::string out;
  std::uint64_t seed = 1;
};

struct SwitchFlags {
  std::optional<int> w;
  std::optional<int> ell;
  std::optional<double> rho;
  std::optional<double> A;
  std::optional<double> t_c;
  std::optional<double> t_off;
  std::optional<double> t_b;
  std::optional<double> t_s;

  void add(CLI::App* app, bool timing) {
    app->add_option("--w", w, "wavelengths per fiber");
    app->add_option("--ell", ell, "slots per burst");
    app->add_option("--rho", rho, "conversion capability in [0,1]");
    app->add_option("--A", A, "per-wavelength arrival probability in [0,1)");
    if (!timing) return;
    app->add_option("--t-c", t_c, "control burst time (alternative to --ell)");
    app->add_option("--t-off", t_off, "offset time");
    app->add_option("--t-b", t_b, "data burst time");
    app->add_option("--t-s", t_s, "slot time");
  }

  std::optional<int> resolved_ell() const {
    const bool any_timing = t_c || t_off || t_b || t_s;
    if (!any_timing) return ell;
    if (ell) throw PreconditionError("give either --ell or the timing flags, not both");
    if (!(t_c && t_off && t_b && t_s)) {
      throw PreconditionError("timing needs all of --t-c, --t-off, --t-b, --t-s");
    }
    return slots_per_burst(TimingSpec{*t_c, *t_off, *t_b, *t_s});
  }
};

struct QosFlags {
  std::optional<int> N;
  std::optional<int> L0;
  std::optional<double> S0;
};

struct SimFlags {
  std::uint64_t horizon = 100000;
  std::optional<std::uint64_t> warmup;
  int replications = 10;
  std::string selection = "random";
  unsigned threads = 0;

  void add(CLI::App* app) {
    app->add_option("--horizon", horizon, "measured slots per replication");
    app->add_option("--warmup", warmup, "discarded slots (default horizon/20)");
    app->add_option("--replications", replications, "independent replications");
    app->add_option("--selection", selection, "free-wavelength choice")
        ->check(CLI::IsMember({"random", "lowest"}));
    app->add_option("--threads", threads, "worker threads (0: hardware)");
  }

  SimConfig config(const SwitchParams& params, std::uint64_t seed) const {
    return SimConfig{params,
                     horizon,
                     warmup.value_or(SimConfig::default_warmup(horizon)),
                     seed,
                     replications,
                     std::nullopt,
                     selection == "lowest" ? WavelengthSelection::lowest_index
                                           : WavelengthSelection::uniform_random,
                     threads};
  }
};

struct GridFlags {
  std::string param;
  std::vector<double> values;
  std::optional<double> start;
  std::optional<double> stop;
  std::optional<int> count;
  std::string scale = "linear";

  void add(CLI::App* app) {
    app->add_option("--param", param, "swept parameter")
        ->check(CLI::IsMember({"arrival_prob", "conversion_capability", "slots_per_burst",
                               "wavelengths", "reserved_L0", "fixed_blocking"}));
    app->add_option("--values", values, "explicit grid, comma separated")->delimiter(',');
    app->add_option("--start", start, "first grid value");
    app->add_option("--stop", stop, "last grid value");
    app->add_option("--count", count, "number of grid values");
    app->add_option("--scale", scale, "grid spacing")->check(CLI::IsMember({"linear", "log"}));
  }

  Axis axis() const {
    if (param.empty()) throw PreconditionError("missing required option --param");
    return *parse_axis(param);
  }

  std::vector<double> grid() const {
    const bool ranged = start || stop || count;
    if (!values.empty() && ranged) {
      throw PreconditionError("give either --values or --start/--stop/--count");
    }
    if (!ranged) {
      if (values.empty()) throw PreconditionError("empty grid");
      return values;
    }
    if (!(start && stop && count)) {
      throw PreconditionError("a ranged grid needs --start, --stop and --count");
    }
    if (*count < 1) throw PreconditionError("empty grid");
    return scale == "log" ? log_grid(*start, *stop, *count) : linear_grid(*start, *stop, *count);
  }
};

template <class T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v) throw PreconditionError(std::string("missing required option ") + flag);
  return *v;
}

template <class T>
T need_unless(const std::optional<T>& v, const char* flag, bool swept) {
  return swept ? T{} : need(v, flag);
}

Point single_point(const SwitchFlags& s, std::optional<Axis> axis) {
  auto swept = [&](Axis a) { return axis && *axis == a; };
  const bool fixed = swept(Axis::fixed_blocking);
  Point p;
  p.w = need_unless(s.w, "--w", swept(Axis::wavelengths));
  p.ell = need_unless(s.resolved_ell(), "--ell", swept(Axis::slots_per_burst));
  p.rho = fixed ? s.rho.value_or(0.0)
                : need_unless(s.rho, "--rho", swept(Axis::conversion_capability));
  p.A = need_unless(s.A, "--A", swept(Axis::arrival_prob));
  return p;
}

Point qos_point(const SwitchFlags& s, const QosFlags& q, bool l0_swept) {
  Point p;
  p.N = need(q.N, "--N");
  p.w = p.N;
  p.L0 = need_unless(q.L0, "--L0", l0_swept);
  p.S0 = need(q.S0, "--S0");
  p.ell = need(s.resolved_ell(), "--ell");
  p.rho = need(s.rho, "--rho");
  p.A = need(s.A, "--A");
  return p;
}

std::int64_t i64(int v) { return v; }
std::int64_t i64(std::uint64_t v) { return static_cast<std::int64_t>(v); }

ConfigEcho effective_config(const CLI::App& app, const CLI::App* sub,
                            const ConfigEntries& file_entries) {
  ConfigEcho echo;
  echo.emplace_back("command", sub->get_name());
  auto collect = [&](const CLI::App& a) {
    for (const CLI::Option* opt : a.get_options()) {
      const std::string& name = opt->get_single_name();
      if (name.empty() || name == "help") continue;
      std::string value;
      if (opt->count() > 0) {
        const auto& res = opt->results();
        for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
      } else {
        auto it = std::find_if(file_entries.begin(), file_entries.end(),
                               [&](const auto& e) { return e.first == name; });
        value = it != file_entries.end() ? it->second : opt->get_default_str();
      }
      if (!value.empty() && value != "{}" && value != "[]") echo.emplace_back(name, value);
    }
  };
  collect(app);
  collect(*sub);
  return echo;
}

class Emitter {
 public:
  Emitter(const Globals& g, const ConfigEcho& echo, std::ostream& out)
      : json_(g.format == "json"), echo_(echo), out_(&out) {}

  void single(const Record& r) const {
    if (json_) {
      auto j = to_json(r);
      j["config"] = to_json(echo_);
      *out_ << j.dump(2) << '\n';
    } else {
      write_csv_header(*out_, r);
      write_csv_row(*out_, r);
      write_csv_trailer(*out_, echo_);
    }
  }

  void table(const std::vector<Record>& rows, const ConfigEcho& extra = {}) const {
    if (json_) {
      nlohmann::ordered_json j = nlohmann::ordered_json::object();
      j["config"] = to_json(echo_);
      j["rows"] = nlohmann::ordered_json::array();
      for (const auto& r : rows) j["rows"].push_back(to_json(r));
      for (const auto& [k, v] : extra) {
        double d = 0.0;
        std::istringstream is(v);
        if (is >> d) {
          j[k] = d;
        } else {
          j[k] = v;
        }
      }
      *out_ << j.dump(2) << '\n';
      return;
    }
    if (!rows.empty()) write_csv_header(*out_, rows.front());
    for (const auto& r : rows) write_csv_row(*out_, r);
    write_csv_trailer(*out_, extra);
    write_csv_trailer(*out_, echo_);
  }

 private:
  bool json_;
  ConfigEcho echo_;
  std::ostream* out_;
};

Record point_record(const Point& p) {
  return {{"w", i64(p.w)}, {"ell", i64(p.ell)}, {"rho", p.rho}, {"A", p.A}};
}

void cmd_eval(const SwitchFlags& s, const Emitter& emit, std::ostream& err) {
  const Point p = single_point(s, std::nullopt);
  const SwitchParams params(p.w, p.ell, p.rho, p.A);
  const double blr = burst_loss_rate(params);
  const bool ok = params.in_derivation_regime();
  if (!ok) err << "warning: w >= ell is outside the model's derivation regime\n";
  Record r = point_record(p);
  r.push_back({"u", i64(params.converters())});
  r.push_back({"blr", blr});
  r.push_back({"regime", std::string(ok ? "ok" : "w>=ell")});
  emit.single(r);
}

void cmd_sweep(const SwitchFlags& s, const QosFlags& q, const GridFlags& g,
               const Emitter& emit) {
  const Axis axis = g.axis();
  const auto grid = g.grid();
  std::vector<Record> rows;
  if (is_qos_axis(axis)) {
    const Point base = qos_point(s, q, true);
    for (double v : grid) {
      const Point p = with_axis_value(base, axis, v);
      const auto r = class_blr(QosParams(p.N, p.L0, p.S0), p.ell, p.rho, p.A);
      rows.push_back({{"param", std::string(axis_name(axis))}, {"value", v}, {"N", i64(p.N)},
                      {"L0", i64(p.L0)}, {"S0", p.S0}, {"ell", i64(p.ell)}, {"rho", p.rho},
                      {"A", p.A}, {"blr_0", r.blr[0]}, {"blr_1", r.blr[1]}});
    }
  } else {
    const Point base = single_point(s, axis);
    for (double v : grid) {
      const Point p = with_axis_value(base, axis, v);
      Record r{{"param", std::string(axis_name(axis))}, {"value", v}};
      for (auto& f : point_record(p)) r.push_back(std::move(f));
      r.push_back({"blr", single_class_blr(p, axis)});
      rows.push_back(std::move(r));
    }
  }
  emit.table(rows);
}

void cmd_qos(const SwitchFlags& s, const QosFlags& q, const std::string& rounding,
             const std::string& class_load, const Emitter& emit) {
  const Point p = qos_point(s, q, false);
  const QosParams params(p.N, p.L0, p.S0);
  QosOptions opts;
  opts.rounding = rounding == "half_even" ? Rounding::half_to_even : Rounding::half_away_from_zero;
  opts.class_load = class_load == "thinned" ? ClassLoad::thinned : ClassLoad::aggregate;
  const auto r = class_blr(params, p.ell, p.rho, p.A, opts);
  emit.single({{"N", i64(p.N)},
               {"L0", i64(params.reserved(0))},
               {"L1", i64(params.reserved(1))},
               {"S0", params.share(0)},
               {"S1", params.share(1)},
               {"ell", i64(p.ell)},
               {"rho", p.rho},
               {"A", p.A},
               {"blr_0", r.blr[0]},
               {"blr_1", r.blr[1]}});
}

void append_estimate(Record& r, const SimEstimate& e, const std::string& suffix) {
  r.push_back({"offered" + suffix, i64(e.offered)});
  r.push_back({"blocked" + suffix, i64(e.blocked)});
  r.push_back({"blr_hat" + suffix, e.blr_hat});
  r.push_back({"ci95" + suffix, e.ci95});
}

void cmd_simulate(const SwitchFlags& s, const QosFlags& q, const SimFlags& sim, bool qos,
                  std::uint64_t seed, const Emitter& emit) {
  const Point p = single_point(s, std::nullopt);
  const SwitchParams params(p.w, p.ell, p.rho, p.A);
  SimConfig config = sim.config(params, seed);
  Record r = point_record(p);
  r.push_back({"u", i64(params.converters())});
  r.push_back({"horizon", i64(config.horizon)});
  r.push_back({"warmup", i64(config.warmup)});
  r.push_back({"replications", i64(config.replications)});
  r.push_back({"seed", i64(seed)});
  if (!qos) {
    append_estimate(r, simulate(config), "");
    emit.single(r);
    return;
  }
  if (q.N && *q.N != p.w) throw PreconditionError("--N must equal --w when simulating classes");
  config.qos = QosParams(p.w, need(q.L0, "--L0"), need(q.S0, "--S0"));
  r.push_back({"L0", i64(config.qos->reserved(0))});
  r.push_back({"S0", config.qos->share(0)});
  const auto est = simulate_qos(config);
  append_estimate(r, est.overall, "");
  append_estimate(r, est.per_class[0], "_0");
  append_estimate(r, est.per_class[1], "_1");
  emit.single(r);
}

void cmd_compare(const SwitchFlags& s, const GridFlags& g, const SimFlags& sim,
                 std::uint64_t seed, const Emitter& emit) {
  const Axis axis = g.axis();
  if (is_qos_axis(axis) || axis == Axis::fixed_blocking) {
    throw PreconditionError("compare supports arrival_prob, conversion_capability, "
                            "slots_per_burst and wavelengths");
  }
  const auto grid = g.grid();
  const Point base = single_point(s, axis);
  std::vector<Record> rows;
  std::vector<double> analytic;
  std::vector<double> simulated;
  for (double v : grid) {
    const Point p = with_axis_value(base, axis, v);
    const SwitchParams params(p.w, p.ell, p.rho, p.A);
    const double a = burst_loss_rate(params);
    const auto est = simulate(sim.config(params, seed));
    analytic.push_back(a);
    simulated.push_back(est.blr_hat);
    rows.push_back({{"param", std::string(axis_name(axis))},
                    {"value", v},
                    {"blr_analytic", a},
                    {"blr_sim", est.blr_hat},
                    {"ci95", est.ci95}});
  }
  emit.table(rows, {{"rank_order_agreement",
                     format_number(rank_order_agreement(analytic, simulated))}});
}

void cmd_figure(int id, const Globals& g, const Emitter& emit) {
  const FigureTable table = compute_figure(id);
  const std::filesystem::path dir = g.out.empty() ? std::filesystem::path(".") : std::filesystem::path(g.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = dir / ("figure_" + std::to_string(id) + ".csv");
  std::ofstream file(path, std::ios::binary);
  if (!file) throw PreconditionError("cannot write " + path.string());
  write_figure_csv(file, table);
  file.close();
  if (!file) throw PreconditionError("cannot write " + path.string());
  emit.single({{"figure", i64(id)},
               {"path", path.string()},
               {"curves", static_cast<std::int64_t>(table.curves.size())},
               {"points", static_cast<std::int64_t>(table.x.size())},
               {"preset_registry_version", i64(kPresetRegistryVersion)}});
}

std::string config_path_from(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

CLI::App* subcommand_from(CLI::App& app, const std::vector<std::string>& args) {
  for (const auto& a : args) {
    for (CLI::App* sub : app.get_subcommands({})) {
      if (sub->get_name() == a) return sub;
    }
  }
  return nullptr;
}

void apply_config(CLI::App& app, CLI::App* sub, const ConfigEntries& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "config") throw PreconditionError("config files cannot nest --config");
    CLI::Option* opt = sub ? sub->get_option_no_throw("--" + key) : nullptr;
    if (opt == nullptr) opt = app.get_option_no_throw("--" + key);
    if (opt == nullptr) throw PreconditionError("unknown config key '" + key + "'");
    opt->run_callback_for_default();
    opt->default_val(value);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Burst loss rate of an OBS core switch with partial wavelength conversion",
               "obsblr"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", g.config, "flat key=value file; command-line flags win");
  app.add_option("--out", g.out, "output file (figure: output directory)");
  app.add_option("--seed", g.seed, "base random seed");

  SwitchFlags sw;
  QosFlags qf;
  SimFlags sim;
  GridFlags grid;
  std::string rounding = "half_away";
  std::string class_load = "aggregate";
  bool qos_sim = false;
  int figure_id = 0;

  auto* eval = app.add_subcommand("eval", "closed-form BLR at one point");
  sw.add(eval, true);

  auto* sweep = app.add_subcommand("sweep", "closed-form BLR over a grid of one parameter");
  sw.add(sweep, true);
  sweep->add_option("--N", qf.N, "total wavelengths (reserved_L0 sweeps)");
  sweep->add_option("--S0", qf.S0, "class-0 traffic share (reserved_L0 sweeps)");
  grid.add(sweep);

  auto* qos = app.add_subcommand("qos", "per-class BLR with a reserved partition");
  sw.add(qos, true);
  qos->add_option("--N", qf.N, "total wavelengths");
  qos->add_option("--L0", qf.L0, "wavelengths reserved for class 0");
  qos->add_option("--S0", qf.S0, "class-0 traffic share");
  qos->add_option("--rounding", rounding, "reallocation rounding")
      ->check(CLI::IsMember({"half_away", "half_even"}));
  qos->add_option("--class-load", class_load, "load seen by each class")
      ->check(CLI::IsMember({"aggregate", "thinned"}));

  auto* simc = app.add_subcommand("simulate", "Monte Carlo estimate of the BLR");
  sw.add(simc, true);
  sim.add(simc);
  simc->add_flag("--qos", qos_sim, "two traffic classes with reserved partitions");
  simc->add_option("--N", qf.N, "total wavelengths (must equal --w)");
  simc->add_option("--L0", qf.L0, "wavelengths reserved for class 0");
  simc->add_option("--S0", qf.S0, "class-0 traffic share");

  auto* cmp = app.add_subcommand("compare", "closed form against simulation over a grid");
  sw.add(cmp, true);
  grid.add(cmp);
  sim.add(cmp);

  auto* fig = app.add_subcommand("figure", "write figure_<id>.csv for a preset figure");
  fig->add_option("id", figure_id, "figure id (2..15)")->required();

  ConfigEntries entries;
  try {
    if (const auto path = config_path_from(args); !path.empty()) entries = load_config(path);
    apply_config(app, subcommand_from(app, args), entries);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const ConfigEcho echo = effective_config(app, sub, entries);
    std::ostringstream buffer;
    const Emitter emit(g, echo, buffer);
    if (sub == eval) {
      cmd_eval(sw, emit, err);
    } else if (sub == sweep) {
      cmd_sweep(sw, qf, grid, emit);
    } else if (sub == qos) {
      cmd_qos(sw, qf, rounding, class_load, emit);
    } else if (sub == simc) {
      cmd_simulate(sw, qf, sim, qos_sim, g.seed, emit);
    } else if (sub == cmp) {
      cmd_compare(sw, grid, sim, g.seed, emit);
    } else if (sub == fig) {
      cmd_figure(figure_id, g, emit);
    }
    if (sub != fig && !g.out.empty()) {
      std::ofstream file(g.out, std::ios::binary);
      file << buffer.str();
      if (!file) throw PreconditionError("cannot write " + g.out);
    } else {
      out << buffer.str();
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace obsblr::cli
