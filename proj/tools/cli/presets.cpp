#include "cli/presets.hpp"

#include <array>
#include <cmath>
#include <ostream>

#include "cli/output.hpp"
#include "obsblr/analytic.hpp"
#include "obsblr/errors.hpp"
#include "obsblr/qos.hpp"

namespace obsblr::cli {
namespace {

constexpr std::array<std::pair<Axis, std::string_view>, 6> kAxisNames{{
    {Axis::arrival_prob, "arrival_prob"},
    {Axis::conversion_capability, "conversion_capability"},
    {Axis::slots_per_burst, "slots_per_burst"},
    {Axis::wavelengths, "wavelengths"},
    {Axis::reserved_L0, "reserved_L0"},
    {Axis::fixed_blocking, "fixed_blocking"},
}};

std::string family_label(Family f, double v) {
  switch (f) {
    case Family::wavelengths: return "w=" + format_number(v);
    case Family::conversion_capability: return "rho=" + format_number(v);
    case Family::arrival_prob: return "A=" + format_number(v);
    case Family::none: break;
  }
  return "blr";
}

Point with_family_value(Point p, Family f, double v) {
  switch (f) {
    case Family::wavelengths: p.w = as_integer(v, "wavelengths"); break;
    case Family::conversion_capability: p.rho = v; break;
    case Family::arrival_prob: p.A = v; break;
    case Family::none: break;
  }
  return p;
}

// Shared axes.
std::vector<double> a_axis() { return log_grid(0.001, 0.05, 25); }
std::vector<double> rho_axis() { return linear_grid(0.0, 1.0, 21); }
std::vector<double> ell_axis() { return linear_grid(20.0, 100.0, 9); }
std::vector<double> w_axis() { return linear_grid(1.0, 30.0, 30); }
std::vector<double> l0_axis() { return linear_grid(1.0, 15.0, 15); }
std::vector<double> pb_axis() { return linear_grid(0.0, 1.0, 21); }

const std::vector<double> kRhoFamily{0.0, 0.3, 0.6, 1.0};
const std::vector<double> kAFamily{0.005, 0.01, 0.02};
const std::vector<double> kQosRhoFamily{0.0, 0.5, 1.0};
const std::vector<double> kQosAFamily{0.1, 0.3, 0.5};

Point single(int w, int ell, double rho, double a) {
  Point p;
  p.w = w;
  p.ell = ell;
  p.rho = rho;
  p.A = a;
  return p;
}

Point qos_point(double rho, double a) {
  Point p;
  p.N = 16;
  p.w = 16;
  p.S0 = 0.5;
  p.ell = 100;
  p.rho = rho;
  p.A = a;
  return p;
}

}  // namespace

std::string_view axis_name(Axis axis) {
  for (const auto& [a, n] : kAxisNames) {
    if (a == axis) return n;
  }
  return "unknown";
}

std::optional<Axis> parse_axis(std::string_view name) {
  for (const auto& [a, n] : kAxisNames) {
    if (n == name) return a;
  }
  return std::nullopt;
}

bool is_qos_axis(Axis axis) { return axis == Axis::reserved_L0; }

int as_integer(double v, std::string_view what) {
  const double r = std::round(v);
  if (!std::isfinite(v) || std::abs(v - r) > 1e-9 || std::abs(r) > 1e9) {
    throw PreconditionError(std::string(what) + " must be an integer, got " + format_number(v));
  }
  return static_cast<int>(r);
}

Point with_axis_value(Point p, Axis axis, double v) {
  switch (axis) {
    case Axis::arrival_prob: p.A = v; break;
    case Axis::conversion_capability: p.rho = v; break;
    case Axis::slots_per_burst: p.ell = as_integer(v, "slots_per_burst"); break;
    case Axis::wavelengths: p.w = as_integer(v, "wavelengths"); break;
    case Axis::reserved_L0: p.L0 = as_integer(v, "reserved_L0"); break;
    case Axis::fixed_blocking: p.pb = v; break;
  }
  return p;
}

double single_class_blr(const Point& p, Axis axis) {
  if (axis == Axis::fixed_blocking) return blr_fixed_blocking(p.w, p.ell, p.A, p.pb);
  return burst_loss_rate(SwitchParams(p.w, p.ell, p.rho, p.A));
}

std::vector<double> linear_grid(double start, double stop, int count) {
  if (count < 1) throw PreconditionError("grid count must be >= 1");
  if (count == 1) return {start};
  std::vector<double> g(static_cast<std::size_t>(count));
  const double step = (stop - start) / (count - 1);
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = start + step * i;
  g.back() = stop;
  return g;
}

std::vector<double> log_grid(double start, double stop, int count) {
  if (!(start > 0.0) || !(stop > 0.0)) {
    throw PreconditionError("log grid bounds must be > 0");
  }
  auto g = linear_grid(std::log(start), std::log(stop), count);
  for (auto& v : g) v = std::exp(v);
  g.front() = start;
  if (count > 1) g.back() = stop;
  return g;
}

std::vector<int> figure_ids() {
  std::vector<int> ids;
  for (int i = 2; i <= 15; ++i) ids.push_back(i);
  return ids;
}

FigurePreset figure_preset(int id) {
  FigurePreset f;
  f.id = id;
  switch (id) {
    case 2:
      f = {id, "BLR vs A, varying w", Axis::arrival_prob, a_axis(), Family::wavelengths,
           {5, 10, 15, 20}, single(0, 100, 0.1, 0.0), {}};
      break;
    case 3:
      f = {id, "BLR vs A, varying rho", Axis::arrival_prob, a_axis(),
           Family::conversion_capability, kRhoFamily, single(20, 100, 0.0, 0.0), {}};
      break;
    case 4:
      f = {id, "BLR vs rho, varying w", Axis::conversion_capability, rho_axis(),
           Family::wavelengths, {5, 10, 15, 20}, single(0, 100, 0.0, 0.01), {}};
      break;
    case 5:
      f = {id, "BLR vs rho, varying A", Axis::conversion_capability, rho_axis(),
           Family::arrival_prob, kAFamily, single(15, 100, 0.0, 0.0), {}};
      break;
    case 6:
      f = {id, "BLR vs ell, varying rho", Axis::slots_per_burst, ell_axis(),
           Family::conversion_capability, kRhoFamily, single(20, 0, 0.0, 0.01), {}};
      break;
    case 7:
      f = {id, "BLR vs ell, varying w", Axis::slots_per_burst, ell_axis(), Family::wavelengths,
           {10, 15, 20}, single(0, 0, 0.1, 0.01), {}};
      break;
    case 8:
      f = {id, "BLR vs w, varying rho", Axis::wavelengths, w_axis(),
           Family::conversion_capability, kRhoFamily, single(0, 100, 0.0, 0.01), {}};
      break;
    case 9:
      f = {id, "BLR vs w, varying A", Axis::wavelengths, w_axis(), Family::arrival_prob,
           kAFamily, single(0, 100, 0.3, 0.0), {}};
      break;
    case 10:
      f = {id, "BLR vs fixed blocking probability", Axis::fixed_blocking, pb_axis(),
           Family::none, {0.0}, single(10, 100, 0.0, 0.01), {}};
      break;
    case 11:
      f = {id, "class 0 BLR vs L0, varying rho", Axis::reserved_L0, l0_axis(),
           Family::conversion_capability, kQosRhoFamily, qos_point(0.0, 0.5), {0}};
      break;
    case 12:
      f = {id, "class 0 BLR vs L0, varying A", Axis::reserved_L0, l0_axis(),
           Family::arrival_prob, kQosAFamily, qos_point(0.5, 0.0), {0}};
      break;
    case 13:
      f = {id, "class 1 BLR vs L0, varying rho", Axis::reserved_L0, l0_axis(),
           Family::conversion_capability, kQosRhoFamily, qos_point(0.0, 0.5), {1}};
      break;
    case 14:
      f = {id, "class 1 BLR vs L0, varying A", Axis::reserved_L0, l0_axis(),
           Family::arrival_prob, kQosAFamily, qos_point(0.5, 0.0), {1}};
      break;
    case 15:
      f = {id, "both classes BLR vs L0, varying rho", Axis::reserved_L0, l0_axis(),
           Family::conversion_capability, kQosRhoFamily, qos_point(0.0, 0.5), {0, 1}};
      break;
    default:
      throw PreconditionError("unknown figure id " + std::to_string(id) +
                              " (expected 2..15)");
  }
  return f;
}

FigureTable compute_figure(const FigurePreset& preset) {
  FigureTable t;
  t.id = preset.id;
  t.x = preset.x;
  for (double fv : preset.family_values) {
    const Point base = with_family_value(preset.base, preset.family, fv);
    const std::string label = family_label(preset.family, fv);
    if (preset.classes.empty()) {
      Curve c{label, {}};
      for (double x : preset.x) {
        c.y.push_back(single_class_blr(with_axis_value(base, preset.x_axis, x), preset.x_axis));
      }
      t.curves.push_back(std::move(c));
      continue;
    }
    std::vector<Curve> per_class;
    for (int cls : preset.classes) {
      per_class.push_back(
          {preset.classes.size() > 1 ? "class" + std::to_string(cls) + "_" + label : label, {}});
    }
    for (double x : preset.x) {
      const Point p = with_axis_value(base, preset.x_axis, x);
      const auto r = class_blr(QosParams(p.N, p.L0, p.S0), p.ell, p.rho, p.A);
      for (std::size_t i = 0; i < preset.classes.size(); ++i) {
        per_class[i].y.push_back(r.blr[static_cast<std::size_t>(preset.classes[i])]);
      }
    }
    for (auto& c : per_class) t.curves.push_back(std::move(c));
  }
  return t;
}

FigureTable compute_figure(int id) { return compute_figure(figure_preset(id)); }

void write_figure_csv(std::ostream& os, const FigureTable& table) {
  os << 'x';
  for (const auto& c : table.curves) os << ',' << c.label;
  os << '\n';
  for (std::size_t i = 0; i < table.x.size(); ++i) {
    os << format_number(table.x[i]);
    for (const auto& c : table.curves) os << ',' << format_number(c.y[i]);
    os << '\n';
  }
}

}  // namespace obsblr::cli
