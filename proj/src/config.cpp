#include "rggx/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace rggx {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigurationError(key + ": " + what);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
    if (!known) fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(path.empty() ? key : path + "." + key, "missing");
  return obj.at(key);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

double positive(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x > 0.0)) fail(path, "must be positive");
  return x;
}

std::int64_t integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

Point2 point2(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected [x, y]");
  return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
}

std::vector<double> vector_of(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Region2 region_from_json(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  const std::string kind = string(require(v, path, "kind"), join(path, "kind"));
  if (kind == "rectangle") {
    check_keys(v, path, {"kind", "lo", "hi"});
    const Point2 lo = point2(require(v, path, "lo"), join(path, "lo"));
    const Point2 hi = point2(require(v, path, "hi"), join(path, "hi"));
    if (!(lo.x <= hi.x && lo.y <= hi.y)) fail(path, "rectangle needs lo <= hi");
    return Region2::rectangle(lo, hi);
  }
  if (kind == "disk") {
    check_keys(v, path, {"kind", "center", "radius"});
    const double r = number(require(v, path, "radius"), join(path, "radius"));
    if (!(r >= 0.0)) fail(join(path, "radius"), "must be non-negative");
    return Region2::disk(point2(require(v, path, "center"), join(path, "center")), r);
  }
  if (kind == "full") {
    check_keys(v, path, {"kind"});
    return Region2::full_plane();
  }
  fail(join(path, "kind"), "unknown region kind '" + kind + "'");
}

json region_to_json(const Region2& region) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Rectangle>) {
          return {{"kind", "rectangle"}, {"lo", {s.lo.x, s.lo.y}}, {"hi", {s.hi.x, s.hi.y}}};
        } else if constexpr (std::is_same_v<T, Disk>) {
          return {{"kind", "disk"}, {"center", {s.center.x, s.center.y}}, {"radius", s.radius}};
        } else {
          return {{"kind", "full"}};
        }
      },
      region.shape());
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  check_keys(doc, "", {"schema", "window", "plane", "regime", "t", "replications", "regions", "seed", "weight",
                       "compute_stress", "constants", "intensity_slack", "quadrature", "outputs"});
  if (integer(require(doc, "", "schema"), "schema") != kConfigSchema)
    fail("schema", "unsupported version (expected " + std::to_string(kConfigSchema) + ")");

  ExperimentConfig cfg;

  const json& win = require(doc, "", "window");
  check_keys(win, "window", {"kind", "dimension"});
  const auto dim = integer(require(win, "window", "dimension"), "window.dimension");
  if (dim < 3 || dim > 16) fail("window.dimension", "must be between 3 and 16");
  const int d = static_cast<int>(dim);
  const std::string wkind = string(require(win, "window", "kind"), "window.kind");
  if (wkind == "cube") {
    cfg.window = Window::cube(d);
  } else if (wkind == "ball") {
    cfg.window = Window::ball(d);
  } else {
    fail("window.kind", "unknown window kind '" + wkind + "'");
  }

  cfg.plane = ProjectionPlane::standard(d);
  if (doc.contains("plane")) {
    const json& pl = doc.at("plane");
    check_keys(pl, "plane", {"axes", "basis"});
    try {
      if (pl.contains("axes") == pl.contains("basis")) fail("plane", "give exactly one of axes or basis");
      if (pl.contains("axes")) {
        const json& ax = pl.at("axes");
        if (!ax.is_array() || ax.size() != 2) fail("plane.axes", "expected two axis indices");
        cfg.plane = ProjectionPlane::axes(d, static_cast<int>(integer(ax[0], "plane.axes[0]")),
                                          static_cast<int>(integer(ax[1], "plane.axes[1]")));
      } else {
        const json& b = pl.at("basis");
        if (!b.is_array() || b.size() != 2) fail("plane.basis", "expected two vectors");
        auto b1 = vector_of(b[0], "plane.basis[0]");
        auto b2 = vector_of(b[1], "plane.basis[1]");
        if (static_cast<int>(b1.size()) != d || static_cast<int>(b2.size()) != d)
          fail("plane.basis", "vectors must have the window dimension");
        cfg.plane = ProjectionPlane::from_basis(std::move(b1), std::move(b2));
      }
    } catch (const ConfigurationError& e) {
      const std::string msg = e.what();
      if (msg.rfind("plane", 0) == 0) throw;
      fail("plane", msg);
    }
  }
  if (cfg.window.kind() == WindowKind::cube && !cfg.plane.coordinate_axes())
    fail("plane", "the cube window needs a coordinate-axis plane");

  const json& reg = require(doc, "", "regime");
  if (!reg.is_object()) fail("regime", "expected an object");
  const std::string rkind = string(require(reg, "regime", "kind"), "regime.kind");
  if (rkind == "sparse" || rkind == "thermodynamic") {
    check_keys(reg, "regime", {"kind", "c"});
    const double c = positive(require(reg, "regime", "c"), "regime.c");
    cfg.regime = rkind == "sparse" ? RegimeSpec::sparse(c, d) : RegimeSpec::thermodynamic(c, d);
  } else if (rkind == "explicit") {
    check_keys(reg, "regime", {"kind", "delta"});
    cfg.regime = RegimeSpec::explicit_radius(positive(require(reg, "regime", "delta"), "regime.delta"), d);
  } else {
    fail("regime.kind", "unknown regime '" + rkind + "'");
  }

  const json& t = require(doc, "", "t");
  cfg.t_values.clear();
  if (t.is_array()) {
    if (t.empty()) fail("t", "at least one intensity required");
    for (std::size_t i = 0; i < t.size(); ++i) cfg.t_values.push_back(positive(t[i], "t[" + std::to_string(i) + "]"));
  } else {
    cfg.t_values.push_back(positive(t, "t"));
  }

  cfg.replications = integer(require(doc, "", "replications"), "replications");
  if (cfg.replications < 1) fail("replications", "must be at least 1");

  if (doc.contains("regions")) {
    const json& rs = doc.at("regions");
    if (!rs.is_array()) fail("regions", "expected an array");
    for (std::size_t i = 0; i < rs.size(); ++i)
      cfg.regions.push_back(region_from_json(rs[i], "regions[" + std::to_string(i) + "]"));
  }

  const json& seed = require(doc, "", "seed");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
    fail("seed", "expected a non-negative integer");
  cfg.seed = seed.get<std::uint64_t>();

  if (doc.contains("weight")) {
    const json& w = doc.at("weight");
    if (!w.is_object()) fail("weight", "expected an object");
    const std::string kind = string(require(w, "weight", "kind"), "weight.kind");
    if (kind == "inverse_sq") {
      check_keys(w, "weight", {"kind"});
      cfg.weight = StressWeight::inverse_sq();
    } else if (kind == "unit") {
      check_keys(w, "weight", {"kind", "bound"});
      cfg.weight = StressWeight::unit(positive(require(w, "weight", "bound"), "weight.bound"));
    } else if (kind == "table") {
      check_keys(w, "weight", {"kind", "breaks", "values", "bound"});
      try {
        cfg.weight = StressWeight::table(vector_of(require(w, "weight", "breaks"), "weight.breaks"),
                                         vector_of(require(w, "weight", "values"), "weight.values"),
                                         positive(require(w, "weight", "bound"), "weight.bound"));
      } catch (const ConfigurationError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        fail("weight", e.what());
      }
    } else {
      fail("weight.kind", "unknown weight '" + kind + "'");
    }
  }

  if (doc.contains("compute_stress")) {
    if (!doc.at("compute_stress").is_boolean()) fail("compute_stress", "expected a boolean");
    cfg.compute_stress = doc.at("compute_stress").get<bool>();
  }
  if (doc.contains("constants")) {
    try {
      cfg.constants = constant_set_from_string(string(doc.at("constants"), "constants"));
    } catch (const ConfigurationError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      fail("constants", e.what());
    }
  }
  if (doc.contains("intensity_slack")) {
    cfg.intensity_slack = number(doc.at("intensity_slack"), "intensity_slack");
    if (cfg.intensity_slack < 0.0) fail("intensity_slack", "must be non-negative");
  }
  if (doc.contains("quadrature")) {
    const json& q = doc.at("quadrature");
    check_keys(q, "quadrature", {"outer_per_axis", "inner_points"});
    if (q.contains("outer_per_axis")) {
      const auto v = integer(q.at("outer_per_axis"), "quadrature.outer_per_axis");
      if (v <= 0) fail("quadrature.outer_per_axis", "must be positive");
      cfg.quadrature.outer_per_axis = static_cast<int>(v);
    }
    if (q.contains("inner_points")) {
      const auto v = integer(q.at("inner_points"), "quadrature.inner_points");
      if (v <= 0) fail("quadrature.inner_points", "must be positive");
      cfg.quadrature.inner_points = static_cast<int>(v);
    }
  }
  if (doc.contains("outputs")) {
    const json& o = doc.at("outputs");
    check_keys(o, "outputs", {"dir", "prefix"});
    if (o.contains("dir")) cfg.output_dir = string(o.at("dir"), "outputs.dir");
    if (o.contains("prefix")) {
      cfg.output_prefix = string(o.at("prefix"), "outputs.prefix");
      if (cfg.output_prefix.empty() || cfg.output_prefix.find('/') != std::string::npos)
        fail("outputs.prefix", "must be a non-empty file name stem");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigurationError(std::string("config: malformed JSON: ") + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["schema"] = kConfigSchema;
  doc["window"] = {{"kind", cfg.window.name()}, {"dimension", cfg.window.dimension()}};
  if (const auto ax = cfg.plane.coordinate_axes()) {
    doc["plane"] = {{"axes", {ax->first, ax->second}}};
  } else {
    doc["plane"] = {{"basis", {cfg.plane.b1(), cfg.plane.b2()}}};
  }
  if (cfg.regime.kind == RegimeKind::explicit_radius) {
    doc["regime"] = {{"kind", "explicit"}, {"delta", cfg.regime.value}};
  } else {
    doc["regime"] = {{"kind", cfg.regime.name()}, {"c", cfg.regime.value}};
  }
  doc["t"] = cfg.t_values;
  doc["replications"] = cfg.replications;
  doc["regions"] = json::array();
  for (const auto& r : cfg.regions) doc["regions"].push_back(region_to_json(r));
  doc["seed"] = cfg.seed;
  switch (cfg.weight.kind()) {
    case WeightKind::inverse_sq: doc["weight"] = {{"kind", "inverse_sq"}}; break;
    case WeightKind::unit: doc["weight"] = {{"kind", "unit"}, {"bound", cfg.weight.bound()}}; break;
    case WeightKind::table:
      doc["weight"] = {{"kind", "table"},
                       {"breaks", cfg.weight.breaks()},
                       {"values", cfg.weight.values()},
                       {"bound", cfg.weight.bound()}};
      break;
  }
  doc["compute_stress"] = cfg.compute_stress;
  doc["constants"] = to_string(cfg.constants);
  doc["intensity_slack"] = cfg.intensity_slack;
  doc["quadrature"] = {{"outer_per_axis", cfg.quadrature.outer_per_axis},
                       {"inner_points", cfg.quadrature.inner_points}};
  doc["outputs"] = {{"dir", cfg.output_dir}, {"prefix", cfg.output_prefix}};
  return doc;
}

std::string config_hash(const ExperimentConfig& cfg) {
  json doc = config_to_json(cfg);
  doc.erase("outputs");
  return fnv1a_hex(doc.dump());
}

json make_manifest(const ExperimentConfig& cfg, const RunSettings& settings, const std::string& command,
                   const std::string& records_file) {
  return {{"schema", kConfigSchema},
          {"tool", "rggx"},
          {"version", kToolVersion},
          {"command", command},
          {"config", config_to_json(cfg)},
          {"config_hash", config_hash(cfg)},
          {"seed", cfg.seed},
          {"threads", settings.threads},
          {"level", settings.level},
          {"tolerance_scale", settings.tolerance_scale},
          {"calibrate", settings.calibrate},
          {"records", records_file}};
}

ExperimentConfig config_from_manifest(const json& manifest) {
  if (!manifest.is_object() || !manifest.contains("config") || !manifest.contains("config_hash"))
    throw ConfigurationError("manifest: missing config or config_hash");
  const ExperimentConfig cfg = config_from_json(manifest.at("config"));
  const std::string recorded = manifest.at("config_hash").get<std::string>();
  if (config_hash(cfg) != recorded)
    throw ConfigurationError("manifest.config_hash: does not match the embedded config");
  return cfg;
}

}  // namespace rggx
