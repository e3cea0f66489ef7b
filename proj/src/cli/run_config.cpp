#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "fiberent/cli.hpp"
#include "json.hpp"

namespace fiberent::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError(field + ": " + message);
}

void reject_unknown_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) fail(where.empty() ? key : where + "." + key, "unknown field");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) fail(where.empty() ? key : where + "." + key, "missing required field");
  return obj.at(key);
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "must be finite");
  return x;
}

double as_non_negative(const json& v, const std::string& field) {
  const double x = as_number(v, field);
  if (x < 0.0) fail(field, "must be >= 0");
  return x;
}

std::size_t as_count(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) fail(field, "expected a non-negative integer");
  return v.get<std::size_t>();
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

Alignment as_sign(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "expected +1 or -1");
  const auto s = v.get<long long>();
  if (s == 1) return Alignment::Aligned;
  if (s == -1) return Alignment::AntiAligned;
  fail(field, "expected +1 or -1");
}

StateKind parse_state(const json& v, const std::string& field) {
  const std::string s = as_string(v, field);
  if (s == "ghz") return StateKind::Ghz;
  if (s == "w") return StateKind::W;
  fail(field, "expected \"ghz\" or \"w\"");
}

ChannelEffect parse_effect(const json& v, const std::string& field) {
  const std::string s = as_string(v, field);
  if (s == "pmd") return ChannelEffect::Pmd;
  if (s == "pdl") return ChannelEffect::Pdl;
  fail(field, "expected \"pmd\" or \"pdl\"");
}

SpectralModel parse_spectrum(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where, "expected an object");
  reject_unknown_keys(v, where, {"kind", "bandwidths"});
  SpectralModel model;
  const std::string kind = as_string(require(v, "kind", where), join(where, "kind"));
  if (kind == "uncorrelated") {
    model.kind = SpectrumKind::UncorrelatedGaussian;
  } else if (kind == "correlated") {
    model.kind = SpectrumKind::CwPumpCorrelated;
  } else {
    fail(join(where, "kind"), "expected \"uncorrelated\" or \"correlated\"");
  }
  const json& bws = require(v, "bandwidths", where);
  if (!bws.is_array()) fail(join(where, "bandwidths"), "expected an array");
  for (std::size_t i = 0; i < bws.size(); ++i) {
    const std::string field = join(where, "bandwidths") + "[" + std::to_string(i) + "]";
    const double bw = as_number(bws[i], field);
    if (bw <= 0.0) fail(field, "must be > 0");
    model.bandwidths.push_back(bw);
  }
  return model;
}

std::vector<FiberChannel> parse_channels(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array");
  std::vector<FiberChannel> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    const json& ch = v[i];
    if (!ch.is_object()) fail(at, "expected an object");
    reject_unknown_keys(ch, at, {"dgd", "dgd_sign", "pdl", "pdl_sign"});
    FiberChannel fc;
    if (ch.contains("dgd")) fc.dgd = as_non_negative(ch["dgd"], at + ".dgd");
    if (ch.contains("dgd_sign")) fc.dgd_sign = as_sign(ch["dgd_sign"], at + ".dgd_sign");
    if (ch.contains("pdl")) fc.pdl = as_non_negative(ch["pdl"], at + ".pdl");
    if (ch.contains("pdl_sign")) fc.pdl_sign = as_sign(ch["pdl_sign"], at + ".pdl_sign");
    out.push_back(fc);
  }
  return out;
}

ScanTarget parse_scan(const json& v, const std::string& field, std::size_t n_qubits) {
  if (v.is_string()) {
    if (v.get<std::string>() == "uniform") return ScanTarget::uniform();
    fail(field, "expected \"uniform\" or {\"photon\": index}");
  }
  if (!v.is_object()) fail(field, "expected \"uniform\" or {\"photon\": index}");
  reject_unknown_keys(v, field, {"photon"});
  const std::size_t photon = as_count(require(v, "photon", field), field + ".photon");
  if (photon >= n_qubits) fail(field + ".photon", "index out of range for " + std::to_string(n_qubits) + " photons");
  return ScanTarget::single(photon);
}

struct Core {
  StateKind state;
  NetworkConfig network;
};

Core parse_core(const json& doc, const std::string& where) {
  Core core;
  core.state = parse_state(require(doc, "state", where), join(where, "state"));
  core.network.n_qubits = as_count(require(doc, "n_qubits", where), join(where, "n_qubits"));
  if (core.network.n_qubits < kMinQubits || core.network.n_qubits > kMaxQubits) {
    fail(join(where, "n_qubits"), "must be between 2 and 12");
  }
  core.network.effect = parse_effect(require(doc, "effect", where), join(where, "effect"));
  core.network.spectrum = parse_spectrum(require(doc, "spectrum", where), join(where, "spectrum"));
  core.network.channels = parse_channels(require(doc, "channels", where), join(where, "channels"));

  const std::size_t n = core.network.n_qubits;
  if (core.network.channels.size() != n) {
    fail(join(where, "channels"), "has " + std::to_string(core.network.channels.size()) + " entries but n_qubits is " +
                                      std::to_string(n));
  }
  if (core.network.spectrum.bandwidths.size() != n) {
    fail(join(where, "spectrum.bandwidths"), "has " + std::to_string(core.network.spectrum.bandwidths.size()) +
                                                 " entries but n_qubits is " + std::to_string(n));
  }
  try {
    core.network.validate();
  } catch (const std::invalid_argument& e) {
    fail(where.empty() ? "config" : where, e.what());
  }
  return core;
}

std::vector<double> parse_grid(const json& sweep) {
  const bool has_grid = sweep.contains("grid");
  const bool has_values = sweep.contains("values");
  if (has_grid == has_values) fail("sweep", "specify exactly one of \"grid\" or \"values\"");
  std::vector<double> grid;
  if (has_grid) {
    const json& g = sweep["grid"];
    if (!g.is_object()) fail("sweep.grid", "expected an object");
    reject_unknown_keys(g, "sweep.grid", {"start", "stop", "points"});
    const double start = as_non_negative(require(g, "start", "sweep.grid"), "sweep.grid.start");
    const double stop = as_number(require(g, "stop", "sweep.grid"), "sweep.grid.stop");
    const std::size_t points = as_count(require(g, "points", "sweep.grid"), "sweep.grid.points");
    if (points < 2) fail("sweep.grid.points", "must be >= 2");
    if (!(stop > start)) fail("sweep.grid.stop", "must exceed start");
    grid = linear_grid(start, stop, points);
  } else {
    const json& vals = sweep["values"];
    if (!vals.is_array()) fail("sweep.values", "expected an array");
    for (std::size_t i = 0; i < vals.size(); ++i) {
      grid.push_back(as_non_negative(vals[i], "sweep.values[" + std::to_string(i) + "]"));
    }
    if (grid.size() < 2) fail("sweep.values", "needs at least two values");
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i] > grid[i - 1])) fail("sweep.values", "must be strictly increasing");
    }
  }
  return grid;
}

SweepSpec parse_sweep(const json& doc, const Core& base) {
  const json& sweep = doc["sweep"];
  if (!sweep.is_object()) fail("sweep", "expected an object");
  reject_unknown_keys(sweep, "sweep", {"scan", "grid", "values", "series"});
  SweepSpec spec;
  spec.grid = parse_grid(sweep);

  std::optional<ScanTarget> default_scan;
  if (sweep.contains("scan")) default_scan = parse_scan(sweep["scan"], "sweep.scan", base.network.n_qubits);

  if (!sweep.contains("series")) {
    if (!default_scan) fail("sweep.scan", "missing required field");
    spec.series.push_back(SweepSeries{"default", base.state, base.network, *default_scan});
    return spec;
  }

  const json& series = sweep["series"];
  if (!series.is_array() || series.empty()) fail("sweep.series", "expected a non-empty array");
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::string at = "sweep.series[" + std::to_string(i) + "]";
    const json& s = series[i];
    if (!s.is_object()) fail(at, "expected an object");
    reject_unknown_keys(s, at, {"label", "state", "n_qubits", "effect", "spectrum", "channels", "scan"});

    json merged = json::object();
    for (const char* key : {"state", "n_qubits", "effect", "spectrum", "channels"}) {
      merged[key] = s.contains(key) ? s[key] : doc[key];
    }
    const Core core = parse_core(merged, at);

    SweepSeries out;
    out.label = s.contains("label") ? as_string(s["label"], at + ".label") : "series" + std::to_string(i);
    if (out.label.empty()) fail(at + ".label", "must not be empty");
    out.kind = core.state;
    out.network = core.network;
    if (s.contains("scan")) {
      out.scan = parse_scan(s["scan"], at + ".scan", core.network.n_qubits);
    } else if (default_scan) {
      out.scan = *default_scan;
    } else {
      fail(at + ".scan", "missing and no sweep.scan default given");
    }
    for (const auto& prev : spec.series) {
      if (prev.label == out.label) fail(at + ".label", "duplicate series label \"" + out.label + "\"");
    }
    spec.series.push_back(std::move(out));
  }
  return spec;
}

EsdSpec parse_esd(const json& v, std::size_t n_qubits) {
  if (!v.is_object()) fail("esd", "expected an object");
  reject_unknown_keys(v, "esd", {"scan", "lo", "hi", "limit"});
  EsdSpec spec;
  spec.scan = parse_scan(require(v, "scan", "esd"), "esd.scan", n_qubits);
  if (v.contains("lo")) spec.lo = as_non_negative(v["lo"], "esd.lo");
  if (v.contains("hi")) spec.hi = as_non_negative(v["hi"], "esd.hi");
  if (v.contains("limit")) spec.limit = as_non_negative(v["limit"], "esd.limit");
  if (spec.lo && !spec.hi) fail("esd.hi", "required when esd.lo is given");
  if (spec.lo && spec.hi && !(*spec.lo < *spec.hi)) fail("esd.hi", "must exceed esd.lo");
  if (spec.hi && !spec.lo && !(*spec.hi > 0.0)) fail("esd.hi", "must be > 0");
  if (!(spec.limit > 0.0)) fail("esd.limit", "must be > 0");
  return spec;
}

oracle::FrequencyGrid parse_oracle(const json& v, const NetworkConfig& network) {
  if (!v.is_object()) fail("oracle", "expected an object");
  reject_unknown_keys(v, "oracle", {"points", "half_width"});
  oracle::FrequencyGrid grid =
      oracle::default_grid(network.n_qubits, network.spectrum.kind == SpectrumKind::CwPumpCorrelated);
  if (v.contains("points")) grid.points = as_count(v["points"], "oracle.points");
  if (v.contains("half_width")) grid.half_width = as_number(v["half_width"], "oracle.half_width");
  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    fail("oracle", e.what());
  }
  return grid;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("config", "top level must be an object");
  reject_unknown_keys(doc, "", {"state", "n_qubits", "effect", "spectrum", "channels", "sweep", "esd", "oracle"});

  const Core core = parse_core(doc, "");
  RunConfig cfg;
  cfg.state = core.state;
  cfg.network = core.network;
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc, core);
  if (doc.contains("esd")) cfg.esd = parse_esd(doc["esd"], core.network.n_qubits);
  if (doc.contains("oracle")) cfg.oracle_grid = parse_oracle(doc["oracle"], core.network);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

}  // namespace fiberent::cli
