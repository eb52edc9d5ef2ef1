#include "gmimo/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "gmimo/errors.hpp"

namespace gmimo::cli {

using nlohmann::json;

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid config";
  for (const std::string& p : problems) out += "\n  " + p;
  return out;
}

// Collects problems while walking one JSON object; keys never requested are
// reported as unknown by finish().
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path, std::vector<std::string>& problems)
      : path_(std::move(path)), problems_(problems) {
    if (node.is_object()) {
      node_ = &node;
    } else {
      fail(path_.empty() ? "config" : path_, "expected an object");
    }
  }

  bool valid() const { return node_ != nullptr; }
  const std::string& path() const { return path_; }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    if (node_ == nullptr) return nullptr;
    const auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  bool has(const std::string& key) const { return node_ != nullptr && node_->contains(key); }

  std::vector<std::string>& problems() { return problems_; }

  // Reader for an optional nested object; nullopt when the key is absent.
  std::optional<ObjectReader> nested(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    return ObjectReader(*v, child(key), problems_);
  }

  void fail(const std::string& where, const std::string& message) { problems_.push_back(where + ": " + message); }

  void missing(const std::string& key) { fail(child(key), "is required"); }

  void finish() {
    if (node_ == nullptr) return;
    for (const auto& item : node_->items()) {
      if (!seen_.contains(item.key())) fail(child(item.key()), "unknown key");
    }
  }

  bool number(const std::string& key, double& out, bool required = false) {
    const json* v = find(key);
    if (v == nullptr) {
      if (required) missing(key);
      return false;
    }
    if (!v->is_number()) {
      fail(child(key), "expected a number");
      return false;
    }
    out = v->get<double>();
    if (!std::isfinite(out)) {
      fail(child(key), "must be finite");
      return false;
    }
    return true;
  }

  bool integer(const std::string& key, int& out, bool required = false) {
    const json* v = find(key);
    if (v == nullptr) {
      if (required) missing(key);
      return false;
    }
    if (!v->is_number_integer()) {
      fail(child(key), "expected an integer");
      return false;
    }
    const auto value = v->is_number_unsigned() ? static_cast<long double>(v->get<std::uint64_t>())
                                               : static_cast<long double>(v->get<std::int64_t>());
    if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
      fail(child(key), "integer out of range");
      return false;
    }
    out = static_cast<int>(value);
    return true;
  }

  bool seed(const std::string& key, std::uint64_t& out) {
    const json* v = find(key);
    if (v == nullptr) {
      fail(child(key), "is required (stochastic experiments need an explicit seed)");
      return false;
    }
    if (v->is_number_unsigned()) {
      out = v->get<std::uint64_t>();
      return true;
    }
    if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
      out = static_cast<std::uint64_t>(v->get<std::int64_t>());
      return true;
    }
    fail(child(key), "expected a nonnegative integer");
    return false;
  }

  bool boolean(const std::string& key, bool& out) {
    const json* v = find(key);
    if (v == nullptr) return false;
    if (!v->is_boolean()) {
      fail(child(key), "expected true or false");
      return false;
    }
    out = v->get<bool>();
    return true;
  }

  bool string(const std::string& key, std::string& out, bool required = false) {
    const json* v = find(key);
    if (v == nullptr) {
      if (required) missing(key);
      return false;
    }
    if (!v->is_string()) {
      fail(child(key), "expected a string");
      return false;
    }
    out = v->get<std::string>();
    return true;
  }

  bool numbers(const std::string& key, std::vector<double>& out, std::size_t exact_size = 0) {
    const json* v = find(key);
    if (v == nullptr) return false;
    if (!v->is_array()) {
      fail(child(key), "expected an array of numbers");
      return false;
    }
    std::vector<double> values;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& e = (*v)[i];
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        fail(child(key) + "[" + std::to_string(i) + "]", "expected a finite number");
        return false;
      }
      values.push_back(e.get<double>());
    }
    if (exact_size != 0 && values.size() != exact_size) {
      fail(child(key), "expected exactly " + std::to_string(exact_size) + " numbers");
      return false;
    }
    if (values.empty()) {
      fail(child(key), "must not be empty");
      return false;
    }
    out = std::move(values);
    return true;
  }

  bool vec3(const std::string& key, Vec3& out) {
    std::vector<double> values;
    if (!numbers(key, values, 3)) return false;
    out = {values[0], values[1], values[2]};
    return true;
  }

 private:
  const json* node_ = nullptr;
  std::string path_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

void require(bool condition, ObjectReader& r, const std::string& key, const std::string& message) {
  if (!condition) r.fail(r.child(key), message);
}

void check_all(const std::vector<double>& values, bool (*predicate)(double), ObjectReader& r, const std::string& key,
               const std::string& message) {
  for (double v : values) {
    if (!predicate(v)) {
      r.fail(r.child(key), message);
      return;
    }
  }
}

bool positive(double v) { return v > 0.0; }

GeometryConfig read_geometry(const json& node, const std::string& path, std::vector<std::string>& problems) {
  GeometryConfig g;
  ObjectReader r(node, path, problems);
  if (!r.valid()) return g;
  r.string("type", g.type);
  r.integer("ports_per_element", g.ports_per_element);
  require(g.ports_per_element == 1 || g.ports_per_element == 2, r, "ports_per_element", "must be 1 or 2");

  if (g.type == "ula") {
    int elements = 0;
    double aperture = 0.0;
    const bool has_elements = r.integer("elements", elements);
    const bool has_aperture = r.number("aperture_m", aperture);
    if (has_elements == has_aperture) {
      r.fail(path, "a ULA needs exactly one of 'elements' or 'aperture_m'");
    }
    if (has_elements) {
      require(elements >= 1, r, "elements", "must be >= 1");
      g.elements = elements;
    }
    if (has_aperture) {
      require(aperture > 0.0, r, "aperture_m", "must be positive");
      g.aperture_m = aperture;
    }
    r.vec3("center", g.center);
    r.vec3("axis", g.axis);
  } else if (g.type == "distributed") {
    const json* list = r.find("subarrays");
    if (list == nullptr) {
      r.missing("subarrays");
    } else if (!list->is_array() || list->empty()) {
      r.fail(r.child("subarrays"), "expected a nonempty array");
    } else {
      for (std::size_t i = 0; i < list->size(); ++i) {
        ObjectReader s((*list)[i], r.child("subarrays") + "[" + std::to_string(i) + "]", problems);
        SubarrayConfig sub;
        if (s.valid()) {
          s.integer("elements", sub.elements, true);
          require(sub.elements >= 1, s, "elements", "must be >= 1");
          s.vec3("center", sub.center);
          s.vec3("axis", sub.axis);
          s.finish();
        }
        g.subarrays.push_back(sub);
      }
    }
  } else {
    r.fail(r.child("type"), "must be 'ula' or 'distributed'");
  }
  r.finish();
  return g;
}

// Builds the geometry to surface physical-constraint violations at parse time.
void check_geometry(const GeometryConfig& g, double frequency, const std::string& path,
                    std::vector<std::string>& problems) {
  try {
    (void)build_geometry(g, frequency);
  } catch (const Error& e) {
    problems.push_back(path + ": " + e.what());
  }
}

bool on_grid(double value, double origin, double step) {
  const double k = (value - origin) / step;
  return std::abs(k - std::round(k)) <= 1e-6;
}

ScaleParams read_scale(ObjectReader& r) {
  ScaleParams p;
  r.number("baseline_hz", p.baseline_hz);
  require(p.baseline_hz > 0.0, r, "baseline_hz", "must be positive");
  r.numbers("targets_hz", p.targets_hz);
  check_all(p.targets_hz, positive, r, "targets_hz", "entries must be positive");
  r.numbers("ue_multipliers", p.ue_multipliers);
  check_all(p.ue_multipliers, [](double v) { return v >= 1.0; }, r, "ue_multipliers", "entries must be >= 1");
  r.number("aperture_m", p.aperture_m);
  require(p.aperture_m > 0.0, r, "aperture_m", "must be positive");
  if (auto q = r.nested("peak_rate"); q && q->valid()) {
    PeakRateConfig& pr = p.peak_rate;
    q->number("bits_per_symbol", pr.bits_per_symbol);
    q->number("streams", pr.streams);
    q->number("bandwidth_hz", pr.bandwidth_hz);
    q->number("target_rate_bps", pr.target_rate_bps);
    require(pr.bits_per_symbol > 0.0, *q, "bits_per_symbol", "must be positive");
    require(pr.streams > 0.0, *q, "streams", "must be positive");
    require(pr.bandwidth_hz > 0.0, *q, "bandwidth_hz", "must be positive");
    require(pr.target_rate_bps > 0.0, *q, "target_rate_bps", "must be positive");
    q->finish();
  }
  return p;
}

BeamfocusParams read_beamfocus(ObjectReader& r) {
  BeamfocusParams p;
  r.number("frequency_hz", p.frequency_hz);
  require(p.frequency_hz > 0.0, r, "frequency_hz", "must be positive");

  const json* arrays = r.find("arrays");
  if (arrays == nullptr) {
    r.missing("arrays");
  } else if (!arrays->is_object() || arrays->empty()) {
    r.fail(r.child("arrays"), "expected a nonempty object of named geometries");
  } else {
    for (const auto& item : arrays->items()) {
      const std::string path = r.child("arrays") + "." + item.key();
      if (item.key().empty() || item.key().find_first_of("/\\") != std::string::npos) {
        r.fail(path, "array names must be nonempty and free of path separators");
      }
      p.arrays[item.key()] = read_geometry(item.value(), path, r.problems());
    }
  }

  r.vec3("focus_m", p.focus_m);
  if (auto g = r.nested("grid"); g && g->valid()) {
    std::vector<double> xs;
    std::vector<double> ys;
    if (g->numbers("x_m", xs, 2)) {
      p.grid.x_min_m = xs[0];
      p.grid.x_max_m = xs[1];
    }
    if (g->numbers("y_m", ys, 2)) {
      p.grid.y_min_m = ys[0];
      p.grid.y_max_m = ys[1];
    }
    g->number("step_m", p.grid.step_m);
    g->finish();
  }
  const GridConfig& grid = p.grid;
  const std::string grid_path = r.child("grid");
  if (!(grid.step_m > 0.0)) r.fail(grid_path + ".step_m", "must be positive");
  if (!(grid.x_max_m > grid.x_min_m)) r.fail(grid_path + ".x_m", "needs min < max");
  if (!(grid.y_max_m > grid.y_min_m)) r.fail(grid_path + ".y_m", "needs min < max");
  if (grid.step_m > 0.0 && grid.x_max_m > grid.x_min_m && grid.y_max_m > grid.y_min_m) {
    const double cells = ((grid.x_max_m - grid.x_min_m) / grid.step_m + 1) * ((grid.y_max_m - grid.y_min_m) / grid.step_m + 1);
    if (cells > 5e7) r.fail(grid_path, "more than 5e7 grid points");
    if (!on_grid(p.focus_m[0], grid.x_min_m, grid.step_m) || p.focus_m[0] < grid.x_min_m ||
        p.focus_m[0] > grid.x_max_m) {
      r.fail(r.child("focus_m"), "x must fall on a grid column");
    }
    if (p.focus_m[1] < grid.y_min_m || p.focus_m[1] > grid.y_max_m) {
      r.fail(r.child("focus_m"), "y must lie inside the grid");
    }
  }

  if (p.frequency_hz > 0.0) {
    for (const auto& [name, geometry] : p.arrays) {
      check_geometry(geometry, p.frequency_hz, r.child("arrays") + "." + name, r.problems());
    }
  }
  return p;
}

MusicParams read_music(ObjectReader& r) {
  MusicParams p;
  r.number("frequency_hz", p.frequency_hz);
  require(p.frequency_hz > 0.0, r, "frequency_hz", "must be positive");
  if (const json* array = r.find("array")) {
    p.array = read_geometry(*array, r.child("array"), r.problems());
  } else {
    r.missing("array");
  }

  const json* sources = r.find("sources");
  if (sources == nullptr) {
    r.missing("sources");
  } else if (!sources->is_array() || sources->empty()) {
    r.fail(r.child("sources"), "expected a nonempty array");
  } else {
    for (std::size_t i = 0; i < sources->size(); ++i) {
      ObjectReader s((*sources)[i], r.child("sources") + "[" + std::to_string(i) + "]", r.problems());
      SourceConfig src;
      if (s.valid()) {
        s.number("azimuth_deg", src.azimuth_deg, true);
        s.number("range_m", src.range_m, true);
        s.number("power", src.power);
        require(std::abs(src.azimuth_deg) < 90.0, s, "azimuth_deg", "must lie in (-90, 90)");
        require(src.range_m > 0.0, s, "range_m", "must be positive");
        require(src.power > 0.0, s, "power", "must be positive");
        s.finish();
      }
      p.sources.push_back(src);
    }
  }

  r.number("snr_db", p.snr_db);
  r.integer("snapshots", p.snapshots);
  require(p.snapshots >= 1, r, "snapshots", "must be >= 1");
  r.seed("seed", p.seed);
  int order = 0;
  if (r.integer("model_order", order)) {
    require(order >= 1, r, "model_order", "must be >= 1");
    p.model_order = order;
  }

  if (auto g = r.nested("grid"); g && g->valid()) {
    std::vector<double> az;
    std::vector<double> rg;
    if (g->numbers("azimuth_deg", az, 2)) {
      p.grid.azimuth_min_deg = az[0];
      p.grid.azimuth_max_deg = az[1];
    }
    g->number("azimuth_step_deg", p.grid.azimuth_step_deg);
    if (g->numbers("range_m", rg, 2)) {
      p.grid.range_min_m = rg[0];
      p.grid.range_max_m = rg[1];
    }
    g->number("range_step_m", p.grid.range_step_m);
    g->finish();
  }
  const MusicGridConfig& grid = p.grid;
  const std::string grid_path = r.child("grid");
  if (!(grid.azimuth_min_deg > -90.0 && grid.azimuth_max_deg < 90.0 && grid.azimuth_max_deg >= grid.azimuth_min_deg)) {
    r.fail(grid_path + ".azimuth_deg", "needs -90 < min <= max < 90");
  }
  if (!(grid.range_min_m > 0.0 && grid.range_max_m >= grid.range_min_m)) {
    r.fail(grid_path + ".range_m", "needs 0 < min <= max");
  }
  if (!(grid.azimuth_step_deg > 0.0)) r.fail(grid_path + ".azimuth_step_deg", "must be positive");
  if (!(grid.range_step_m > 0.0)) r.fail(grid_path + ".range_step_m", "must be positive");

  if (auto d = r.nested("detector"); d && d->valid()) {
    d->number("threshold", p.peak_threshold);
    d->integer("min_separation", p.peak_min_separation);
    require(p.peak_threshold > 0.0 && p.peak_threshold <= 1.0, *d, "threshold", "must lie in (0, 1]");
    require(p.peak_min_separation >= 1, *d, "min_separation", "must be >= 1");
    d->finish();
  }
  if (auto t = r.nested("tolerance"); t && t->valid()) {
    t->number("azimuth_deg", p.tolerance_azimuth_deg);
    t->number("range_m", p.tolerance_range_m);
    require(p.tolerance_azimuth_deg > 0.0, *t, "azimuth_deg", "must be positive");
    require(p.tolerance_range_m > 0.0, *t, "range_m", "must be positive");
    t->finish();
  }

  if (p.frequency_hz > 0.0 && r.has("array")) {
    try {
      const ArrayGeometry g = build_geometry(p.array, p.frequency_hz);
      const int k = p.model_order.value_or(static_cast<int>(p.sources.size()));
      if (k >= static_cast<int>(g.element_count())) {
        r.fail(r.child("model_order"), "must be smaller than the element count (" +
                                           std::to_string(g.element_count()) + ")");
      }
    } catch (const Error& e) {
      r.fail(r.child("array"), e.what());
    }
  }
  return p;
}

CapacityParams read_capacity(ObjectReader& r) {
  CapacityParams p;
  r.number("frequency_hz", p.frequency_hz);
  require(p.frequency_hz > 0.0, r, "frequency_hz", "must be positive");
  for (const char* key : {"bs", "ue"}) {
    GeometryConfig& target = std::string(key) == "bs" ? p.bs : p.ue;
    if (const json* node = r.find(key)) {
      target = read_geometry(*node, r.child(key), r.problems());
    } else {
      r.missing(key);
    }
  }
  r.integer("users", p.users);
  require(p.users >= 1, r, "users", "must be >= 1");
  r.number("min_range_m", p.min_range_m);
  r.number("max_range_m", p.max_range_m);
  require(p.min_range_m > 0.0, r, "min_range_m", "must be positive");
  require(p.max_range_m >= p.min_range_m, r, "max_range_m", "must be >= min_range_m");
  r.number("max_azimuth_deg", p.max_azimuth_deg);
  require(p.max_azimuth_deg > 0.0 && p.max_azimuth_deg < 90.0, r, "max_azimuth_deg", "must lie in (0, 90)");
  r.integer("drops", p.drops);
  require(p.drops >= 1, r, "drops", "must be >= 1");
  r.seed("seed", p.seed);

  if (auto c = r.nested("channel"); c && c->valid()) {
    ChannelConfig& ch = p.channel;
    c->integer("clusters", ch.clusters);
    c->number("rician_k_db", ch.rician_k_db);
    c->number("cross_polar_ratio_db", ch.cross_polar_ratio_db);
    c->number("bandwidth_hz", ch.bandwidth_hz);
    c->number("noise_figure_db", ch.noise_figure_db);
    c->number("tx_power_w_per_hz", ch.tx_power_w_per_hz);
    c->boolean("path_loss", ch.path_loss);
    require(ch.clusters >= 0, *c, "clusters", "must be >= 0");
    require(ch.bandwidth_hz > 0.0, *c, "bandwidth_hz", "must be positive");
    require(ch.noise_figure_db >= 0.0, *c, "noise_figure_db", "must be >= 0");
    require(ch.tx_power_w_per_hz > 0.0, *c, "tx_power_w_per_hz", "must be positive");
    c->finish();
  }

  if (p.frequency_hz > 0.0) {
    if (r.has("bs")) check_geometry(p.bs, p.frequency_hz, r.child("bs"), r.problems());
    if (r.has("ue")) check_geometry(p.ue, p.frequency_hz, r.child("ue"), r.problems());
  }
  return p;
}

LinkBudgetParams read_linkbudget(ObjectReader& r) {
  LinkBudgetParams p;
  r.number("tx_power_w", p.tx_power_w);
  r.number("tx_area_m2", p.tx_area_m2);
  r.number("rx_area_m2", p.rx_area_m2);
  require(p.tx_power_w > 0.0, r, "tx_power_w", "must be positive");
  require(p.tx_area_m2 > 0.0, r, "tx_area_m2", "must be positive");
  require(p.rx_area_m2 > 0.0, r, "rx_area_m2", "must be positive");
  r.numbers("frequencies_hz", p.frequencies_hz);
  r.numbers("distances_m", p.distances_m);
  r.numbers("bandwidths_hz", p.bandwidths_hz);
  check_all(p.frequencies_hz, positive, r, "frequencies_hz", "entries must be positive");
  check_all(p.distances_m, positive, r, "distances_m", "entries must be positive");
  check_all(p.bandwidths_hz, positive, r, "bandwidths_hz", "entries must be positive");
  r.number("noise_figure_db", p.noise_figure_db);
  require(p.noise_figure_db >= 0.0, r, "noise_figure_db", "must be >= 0");
  return p;
}

json vec3_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json geometry_json(const GeometryConfig& g) {
  json out;
  out["type"] = g.type;
  out["ports_per_element"] = g.ports_per_element;
  if (g.type == "distributed") {
    json list = json::array();
    for (const SubarrayConfig& s : g.subarrays) {
      list.push_back({{"elements", s.elements}, {"center", vec3_json(s.center)}, {"axis", vec3_json(s.axis)}});
    }
    out["subarrays"] = list;
  } else {
    if (g.elements) out["elements"] = *g.elements;
    if (g.aperture_m) out["aperture_m"] = *g.aperture_m;
    out["center"] = vec3_json(g.center);
    out["axis"] = vec3_json(g.axis);
  }
  return out;
}

std::string source_excerpt(std::string_view text, std::size_t byte, std::size_t& line, std::size_t& column) {
  line = 1;
  column = 1;
  const std::size_t end = std::min(byte, text.size());
  std::size_t line_start = 0;
  for (std::size_t i = 0; i + 1 < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      line_start = i + 1;
    }
  }
  column = end > line_start ? end - line_start : 1;
  const std::size_t line_end = text.find('\n', line_start);
  return std::string(text.substr(line_start, (line_end == std::string_view::npos ? text.size() : line_end) - line_start));
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

ArrayGeometry build_geometry(const GeometryConfig& config, double frequency) {
  const auto point = [](const Vec3& v) { return Point3(v[0], v[1], v[2]); };
  if (config.type == "distributed") {
    std::vector<SubarraySpec> specs;
    for (const SubarrayConfig& s : config.subarrays) specs.push_back({s.elements, point(s.center), point(s.axis)});
    return build_distributed(specs, frequency, config.ports_per_element);
  }
  int n = config.elements.value_or(0);
  if (config.aperture_m) n = std::max(1, elements_per_side(*config.aperture_m, frequency));
  return build_ula(n, frequency, point(config.center), point(config.axis), config.ports_per_element);
}

std::string ScenarioConfig::experiment() const { return experiment_names()[params.index()]; }

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"scale", "beamfocus", "music", "capacity", "linkbudget"};
  return names;
}

ScenarioConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 0;
    std::size_t column = 0;
    const std::string excerpt = source_excerpt(text, e.byte, line, column);
    throw ConfigError({"syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                       e.what() + " near '" + excerpt + "'"});
  }

  std::vector<std::string> problems;
  ObjectReader r(root, "", problems);
  ScenarioConfig config;
  if (!r.valid()) throw ConfigError(problems);

  std::string experiment;
  r.string("experiment", experiment, true);
  const auto& names = experiment_names();
  const auto found = std::find(names.begin(), names.end(), experiment);
  if (!experiment.empty() && found == names.end()) {
    r.fail("experiment", "unknown experiment '" + experiment + "'");
  }

  config.output_prefix = experiment;
  if (r.string("output_prefix", config.output_prefix)) {
    if (config.output_prefix.empty() || config.output_prefix.find_first_of("/\\") != std::string::npos ||
        config.output_prefix.front() == '.') {
      r.fail("output_prefix", "must be a nonempty file-name prefix without path separators");
    }
  }

  if (found != names.end()) {
    switch (found - names.begin()) {
      case 0: config.params = read_scale(r); break;
      case 1: config.params = read_beamfocus(r); break;
      case 2: config.params = read_music(r); break;
      case 3: config.params = read_capacity(r); break;
      default: config.params = read_linkbudget(r); break;
    }
    r.finish();
  }
  if (!problems.empty()) throw ConfigError(problems);
  return config;
}

std::string serialize(const ScenarioConfig& config) {
  json out;
  out["experiment"] = config.experiment();
  out["output_prefix"] = config.output_prefix;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ScaleParams>) {
          out["baseline_hz"] = p.baseline_hz;
          out["targets_hz"] = p.targets_hz;
          out["ue_multipliers"] = p.ue_multipliers;
          out["aperture_m"] = p.aperture_m;
          out["peak_rate"] = {{"bits_per_symbol", p.peak_rate.bits_per_symbol},
                              {"streams", p.peak_rate.streams},
                              {"bandwidth_hz", p.peak_rate.bandwidth_hz},
                              {"target_rate_bps", p.peak_rate.target_rate_bps}};
        } else if constexpr (std::is_same_v<T, BeamfocusParams>) {
          out["frequency_hz"] = p.frequency_hz;
          json arrays = json::object();
          for (const auto& [name, g] : p.arrays) arrays[name] = geometry_json(g);
          out["arrays"] = arrays;
          out["focus_m"] = vec3_json(p.focus_m);
          out["grid"] = {{"x_m", {p.grid.x_min_m, p.grid.x_max_m}},
                         {"y_m", {p.grid.y_min_m, p.grid.y_max_m}},
                         {"step_m", p.grid.step_m}};
        } else if constexpr (std::is_same_v<T, MusicParams>) {
          out["frequency_hz"] = p.frequency_hz;
          out["array"] = geometry_json(p.array);
          json sources = json::array();
          for (const SourceConfig& s : p.sources) {
            sources.push_back({{"azimuth_deg", s.azimuth_deg}, {"range_m", s.range_m}, {"power", s.power}});
          }
          out["sources"] = sources;
          out["snr_db"] = p.snr_db;
          out["snapshots"] = p.snapshots;
          out["seed"] = p.seed;
          if (p.model_order) out["model_order"] = *p.model_order;
          out["grid"] = {{"azimuth_deg", {p.grid.azimuth_min_deg, p.grid.azimuth_max_deg}},
                         {"azimuth_step_deg", p.grid.azimuth_step_deg},
                         {"range_m", {p.grid.range_min_m, p.grid.range_max_m}},
                         {"range_step_m", p.grid.range_step_m}};
          out["detector"] = {{"threshold", p.peak_threshold}, {"min_separation", p.peak_min_separation}};
          out["tolerance"] = {{"azimuth_deg", p.tolerance_azimuth_deg}, {"range_m", p.tolerance_range_m}};
        } else if constexpr (std::is_same_v<T, CapacityParams>) {
          out["frequency_hz"] = p.frequency_hz;
          out["bs"] = geometry_json(p.bs);
          out["ue"] = geometry_json(p.ue);
          out["users"] = p.users;
          out["min_range_m"] = p.min_range_m;
          out["max_range_m"] = p.max_range_m;
          out["max_azimuth_deg"] = p.max_azimuth_deg;
          out["channel"] = {{"clusters", p.channel.clusters},
                            {"rician_k_db", p.channel.rician_k_db},
                            {"cross_polar_ratio_db", p.channel.cross_polar_ratio_db},
                            {"bandwidth_hz", p.channel.bandwidth_hz},
                            {"noise_figure_db", p.channel.noise_figure_db},
                            {"tx_power_w_per_hz", p.channel.tx_power_w_per_hz},
                            {"path_loss", p.channel.path_loss}};
          out["drops"] = p.drops;
          out["seed"] = p.seed;
        } else {
          out["tx_power_w"] = p.tx_power_w;
          out["tx_area_m2"] = p.tx_area_m2;
          out["rx_area_m2"] = p.rx_area_m2;
          out["frequencies_hz"] = p.frequencies_hz;
          out["distances_m"] = p.distances_m;
          out["bandwidths_hz"] = p.bandwidths_hz;
          out["noise_figure_db"] = p.noise_figure_db;
        }
      },
      config.params);
  return out.dump(2) + "\n";
}

}  // namespace gmimo::cli
