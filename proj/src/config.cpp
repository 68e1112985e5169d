#include "edlab/config.hpp"

#include "edlab/errors.hpp"

#include <cmath>
#include <sstream>

namespace edlab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " from '" + s + "'");
  }
}

}  // namespace

TimeGrid TimeGrid::parse(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3 && parts.size() != 4) {
    throw ConfigError("time grid '" + spec + "' must read start:stop:points[:log]");
  }
  TimeGrid g;
  g.start = to_double(parts[0], "grid start");
  g.stop = to_double(parts[1], "grid stop");
  const double pts = to_double(parts[2], "grid points");
  if (pts < 1 || pts != std::floor(pts)) throw ConfigError("grid points must be a positive integer");
  g.points = static_cast<std::size_t>(pts);
  g.logarithmic = false;
  if (parts.size() == 4) {
    if (parts[3] == "log") {
      g.logarithmic = true;
    } else if (parts[3] != "lin") {
      throw ConfigError("grid spacing must be 'log' or 'lin', got '" + parts[3] + "'");
    }
  }
  if (g.start < 0.0 || g.stop < g.start || (g.points > 1 && g.stop == g.start)) {
    throw ConfigError("time grid must be ascending and nonnegative");
  }
  if (g.logarithmic && g.start <= 0.0) throw ConfigError("logarithmic grid needs start > 0");
  return g;
}

std::string TimeGrid::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << start << ':' << stop << ':' << points << ':' << (logarithmic ? "log" : "lin");
  return os.str();
}

std::vector<double> TimeGrid::values() const {
  std::vector<double> ts(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    ts[i] = logarithmic ? start * std::pow(stop / start, f) : start + (stop - start) * f;
  }
  if (points > 1) ts.back() = stop;
  return ts;
}

ExperimentKind parse_experiment_kind(std::string_view s) {
  if (s == "entanglement") return ExperimentKind::entanglement;
  if (s == "diffusion") return ExperimentKind::diffusion;
  if (s == "levelstats") return ExperimentKind::levelstats;
  if (s == "collapse") return ExperimentKind::collapse;
  if (s == "saturation") return ExperimentKind::saturation;
  throw ConfigError("unknown experiment '" + std::string(s) + "'");
}

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::entanglement: return "entanglement";
    case ExperimentKind::diffusion: return "diffusion";
    case ExperimentKind::levelstats: return "levelstats";
    case ExperimentKind::collapse: return "collapse";
    case ExperimentKind::saturation: return "saturation";
  }
  return "?";
}

CouplingParams ExperimentConfig::params(int L) const {
  CouplingParams p = ::edlab::preset(this->preset, L);
  if (g) p.g = *g;
  if (h) p.h = *h;
  if (J) p.J = *J;
  return p;
}

std::string ExperimentConfig::label() const {
  return (g || h || J) ? std::string("custom") : preset;
}

void ExperimentConfig::validate() const {
  if (lengths.empty()) throw ConfigError("no chain lengths given");
  for (int L : lengths) edlab::validate(params(L));
  if (ensemble < 1) throw ConfigError("ensemble size must be at least 1");
  if (grid.points < 1) throw ConfigError("time grid needs at least one point");
  const auto ts = grid.values();
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (!(ts[i] > ts[i - 1])) throw ConfigError("time grid must be strictly ascending");
  }
  if (!(saturation.start <= saturation.stop) || saturation_samples < 1) {
    throw ConfigError("saturation window must be nonempty");
  }
  if (!(linear_fit.start < linear_fit.stop) || !(power_fit.start < power_fit.stop)) {
    throw ConfigError("fit windows must be nonempty");
  }
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (kind == ExperimentKind::collapse && lengths.size() < 2) {
    throw ConfigError("collapse needs at least two chain lengths");
  }
}

TimeWindow parse_window(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 2) throw ConfigError("window '" + spec + "' must read start:stop");
  TimeWindow w{to_double(parts[0], "window start"), to_double(parts[1], "window stop")};
  if (!(w.start <= w.stop)) throw ConfigError("window '" + spec + "' is empty");
  return w;
}

std::vector<int> parse_lengths(const std::string& spec) {
  std::vector<int> out;
  for (const auto& part : split(spec, ',')) {
    const double v = to_double(part, "chain length");
    if (v != std::floor(v)) throw ConfigError("chain length '" + part + "' is not an integer");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw ConfigError("empty chain length list");
  return out;
}

}  // namespace edlab
