#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace obsblr::cli {

/// Parameter that a sweep or figure varies along its x axis.
enum class Axis {
  arrival_prob,
  conversion_capability,
  slots_per_burst,
  wavelengths,
  reserved_L0,
  fixed_blocking,
};

std::string_view axis_name(Axis axis);
std::optional<Axis> parse_axis(std::string_view name);
bool is_qos_axis(Axis axis);

/// Full parameter point; fields irrelevant to a computation are ignored.
struct Point {
  int w = 0;
  int ell = 0;
  double rho = 0.0;
  double A = 0.0;
  int N = 0;
  int L0 = 0;
  double S0 = 0.5;
  double pb = 0.0;
};

/// Rejects non-integral values for integer-valued parameters.
int as_integer(double v, std::string_view what);
Point with_axis_value(Point p, Axis axis, double v);

/// Single-class BLR at `p`; for Axis::fixed_blocking, `p.pb` replaces the
/// per-occupancy blocking profile.
double single_class_blr(const Point& p, Axis axis);

std::vector<double> linear_grid(double start, double stop, int count);
std::vector<double> log_grid(double start, double stop, int count);

/// Parameter that distinguishes the curves of one figure.
enum class Family { none, wavelengths, conversion_capability, arrival_prob };

struct FigurePreset {
  int id = 0;
  std::string_view title;
  Axis x_axis = Axis::arrival_prob;
  std::vector<double> x;
  Family family = Family::none;
  std::vector<double> family_values;
  Point base;
  std::vector<int> classes;  ///< empty for single-class figures
};

inline constexpr int kPresetRegistryVersion = 1;

std::vector<int> figure_ids();
/// Throws PreconditionError for an unknown id.
FigurePreset figure_preset(int id);

struct Curve {
  std::string label;
  std::vector<double> y;
};

struct FigureTable {
  int id = 0;
  std::vector<double> x;
  std::vector<Curve> curves;
};

FigureTable compute_figure(const FigurePreset& preset);
FigureTable compute_figure(int id);
void write_figure_csv(std::ostream& os, const FigureTable& table);

}  // namespace obsblr::cli
