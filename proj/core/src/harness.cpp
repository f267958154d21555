#include "frflow/harness.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "frflow/errors.h"
#include "frflow/transform.h"

static_assert(std::endian::native == std::endian::little,
              "snapshot serialization assumes a little-endian host");

namespace frflow {
namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_line(int line, const std::string& msg) {
  throw ValidationError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line, const std::string& key) {
  const char* s = v.c_str();
  char* end = nullptr;
  double x = std::strtod(s, &end);
  if (end == s || *end != '\0')
    fail_line(line, key + ": expected a number, got '" + v + "'");
  return x;
}

long parse_long(const std::string& v, int line, const std::string& key) {
  const char* s = v.c_str();
  char* end = nullptr;
  long x = std::strtol(s, &end, 10);
  if (end == s || *end != '\0')
    fail_line(line, key + ": expected an integer, got '" + v + "'");
  return x;
}

std::vector<std::string> split_commas(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (!v.empty() && v.back() == ',') out.push_back("");
  return out;
}

std::array<double, 2> parse_pair(const std::string& v, int line,
                                 const std::string& key) {
  auto parts = split_commas(v);
  if (parts.size() != 2)
    fail_line(line, key + ": expected 'x,y', got '" + v + "'");
  return {parse_double(parts[0], line, key), parse_double(parts[1], line, key)};
}

const std::map<std::string, Variant> kVariantNames = {
    {"sqg_physical", Variant::kSqgPhysical},
    {"sqg_scaled", Variant::kSqgScaled},
    {"boussinesq_physical", Variant::kBoussinesqPhysical},
    {"boussinesq_scaled", Variant::kBoussinesqScaled},
    {"linear_scaled", Variant::kLinearScaled},
};

std::string variant_name(Variant v) {
  for (const auto& [name, val] : kVariantNames)
    if (val == v) return name;
  throw ValidationError("unknown variant tag");
}

struct KvEntry {
  std::string value;
  int line = 0;
  bool used = false;
};

int resolve_expansion_order(const RunConfig& cfg) {
  if (cfg.expansion_order >= 0) return cfg.expansion_order;
  if (is_scaled(cfg.variant)) return 0;
  return is_boussinesq(cfg.variant) ? 2 : 1;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  if (v.empty()) return "none";
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt17(v[i]);
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, KvEntry> kv;
  {
    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
      ++line;
      std::string s = raw.substr(0, raw.find('#'));
      s = trim(s);
      if (s.empty()) continue;
      size_t eq = s.find('=');
      if (eq == std::string::npos)
        fail_line(line, "expected 'key = value', got '" + trim(raw) + "'");
      std::string key = trim(s.substr(0, eq));
      std::string value = trim(s.substr(eq + 1));
      if (key.empty()) fail_line(line, "empty key");
      if (kv.count(key))
        fail_line(line, "duplicate key '" + key + "' (first on line " +
                            std::to_string(kv[key].line) + ")");
      kv[key] = {value, line, false};
    }
  }

  auto take = [&](const std::string& key) -> KvEntry* {
    auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  };
  auto require = [&](const std::string& key) -> KvEntry& {
    KvEntry* e = take(key);
    if (!e) throw ValidationError("config: missing required key '" + key + "'");
    return *e;
  };

  RunConfig cfg;

  {
    KvEntry& e = require("variant");
    auto it = kVariantNames.find(e.value);
    if (it == kVariantNames.end())
      fail_line(e.line, "unknown variant '" + e.value + "'");
    cfg.variant = it->second;
  }
  const bool bouss = is_boussinesq(cfg.variant);
  const bool scaled = is_scaled(cfg.variant);

  {
    KvEntry& e = require("alpha");
    cfg.alpha = parse_double(e.value, e.line, "alpha");
    if (!(cfg.alpha > 1.0 && cfg.alpha <= 2.0))
      fail_line(e.line, "alpha must lie in (1,2]");
  }
  {
    KvEntry& e = require("beta");
    cfg.beta = parse_double(e.value, e.line, "beta");
    if (!(cfg.beta >= 0.0 && cfg.beta < 2.0))
      fail_line(e.line, "beta must lie in [0,2)");
    if (bouss && cfg.beta != 1.0)
      fail_line(e.line, "the coupled system requires beta = 1");
  }
  {
    KvEntry& e = require("n");
    long n = parse_long(e.value, e.line, "n");
    if (n < 8 || n % 2 != 0 || n > 4096)
      fail_line(e.line, "n must be an even integer in [8, 4096]");
    cfg.n = static_cast<int>(n);
  }
  {
    KvEntry& e = require("box");
    cfg.box_length = parse_double(e.value, e.line, "box");
    if (!(cfg.box_length > 0.0) || !std::isfinite(cfg.box_length))
      fail_line(e.line, "box must be a positive length");
  }
  {
    KvEntry& e = require("dt");
    cfg.dt = parse_double(e.value, e.line, "dt");
    if (!(cfg.dt > 0.0 && cfg.dt <= 1.0))
      fail_line(e.line, "dt must lie in (0,1]");
  }
  {
    KvEntry* t = take("t_end");
    KvEntry* tau = take("tau_end");
    if (tau && !scaled)
      fail_line(tau->line, "tau_end applies to scaled variants only");
    if (t && tau)
      fail_line(tau->line, "tau_end duplicates t_end");
    KvEntry* e = t ? t : tau;
    if (!e) throw ValidationError("config: missing required key 't_end'");
    cfg.t_end = parse_double(e->value, e->line, "t_end");
    if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end))
      fail_line(e->line, "t_end must be positive");
  }
  if (KvEntry* e = take("cadence")) {
    cfg.cadence = parse_double(e->value, e->line, "cadence");
    if (!(cfg.cadence > 0.0))
      fail_line(e->line, "cadence must be positive");
  }
  if (KvEntry* e = take("label")) {
    if (e->value.empty() ||
        e->value.find_first_of("/\\ \t") != std::string::npos)
      fail_line(e->line, "label must be a nonempty token without slashes or spaces");
    cfg.label = e->value;
  }
  if (KvEntry* e = take("output_dir")) cfg.output_dir = e->value;
  if (KvEntry* e = take("profile_p")) {
    cfg.profile_p.clear();
    if (e->value != "none") {
      for (const auto& part : split_commas(e->value)) {
        double p = parse_double(part, e->line, "profile_p");
        if (p != 1.0 && p != 2.0)
          fail_line(e->line, "profile_p entries must be 1 or 2");
        cfg.profile_p.push_back(p);
      }
    }
  }
  if (KvEntry* e = take("expansion_order")) {
    long o = parse_long(e->value, e->line, "expansion_order");
    if (o < 0 || o > 2) fail_line(e->line, "expansion_order must be 0, 1, or 2");
    if (o == 2 && !bouss)
      fail_line(e->line, "expansion_order 2 needs the coupled system");
    if (o == 1 && bouss)
      fail_line(e->line, "the coupled system expands to order 0 or 2");
    if (o > 0 && scaled)
      fail_line(e->line, "profile expansion applies to physical-variable runs");
    cfg.expansion_order = static_cast<int>(o);
  }
  if (KvEntry* e = take("profile_center"))
    cfg.profile_center = parse_pair(e->value, e->line, "profile_center");
  if (KvEntry* e = take("snapshots")) {
    if (e->value != "none") {
      for (const auto& part : split_commas(e->value)) {
        double t = parse_double(part, e->line, "snapshots");
        if (!(t > 0.0) || !std::isfinite(t))
          fail_line(e->line, "snapshot times must be positive");
        cfg.snapshot_times.push_back(t);
      }
      std::sort(cfg.snapshot_times.begin(), cfg.snapshot_times.end());
      cfg.snapshot_times.erase(
          std::unique(cfg.snapshot_times.begin(), cfg.snapshot_times.end()),
          cfg.snapshot_times.end());
    }
  }

  auto parse_ic = [&](const std::string& prefix, IcSpec& ic) -> bool {
    KvEntry* fam = take(prefix);
    if (!fam) return false;
    ic.family = fam->value;
    const std::set<std::string> families = {"gaussian", "dipole", "random",
                                            "zero", "snapshot"};
    if (!families.count(ic.family))
      fail_line(fam->line,
                prefix + ": unknown initial-condition family '" + ic.family + "'");
    if (KvEntry* e = take(prefix + "_amplitude"))
      ic.amplitude = parse_double(e->value, e->line, prefix + "_amplitude");
    if (KvEntry* e = take(prefix + "_sigma")) {
      ic.sigma = parse_double(e->value, e->line, prefix + "_sigma");
      if (!(ic.sigma > 0.0)) fail_line(e->line, prefix + "_sigma must be positive");
    }
    if (KvEntry* e = take(prefix + "_center"))
      ic.center = parse_pair(e->value, e->line, prefix + "_center");
    if (KvEntry* e = take(prefix + "_jmax")) {
      long j = parse_long(e->value, e->line, prefix + "_jmax");
      if (j < 1 || j > cfg.n / 2 - 1)
        fail_line(e->line, prefix + "_jmax must lie in [1, n/2-1]");
      ic.jmax = static_cast<int>(j);
    }
    if (KvEntry* e = take(prefix + "_seed")) {
      long s = parse_long(e->value, e->line, prefix + "_seed");
      if (s < 0) fail_line(e->line, prefix + "_seed must be nonnegative");
      ic.seed = static_cast<unsigned>(s);
    }
    if (KvEntry* e = take(prefix + "_path")) {
      if (ic.family != "snapshot")
        fail_line(e->line, prefix + "_path requires " + prefix + " = snapshot");
      ic.path = e->value;
    }
    if (ic.family == "snapshot" && ic.path.empty())
      fail_line(fam->line, prefix + " = snapshot requires " + prefix + "_path");
    return true;
  };

  if (!parse_ic("ic", cfg.ic))
    throw ValidationError("config: missing required key 'ic'");
  cfg.has_theta_ic = parse_ic("theta_ic", cfg.ic_theta);
  if (cfg.has_theta_ic && !bouss)
    throw ValidationError(
        "config: theta_ic applies to the coupled system only");
  if (cfg.has_theta_ic && cfg.ic.family == "snapshot")
    throw ValidationError(
        "config: a snapshot restart already carries theta; drop theta_ic");
  if (bouss && !cfg.has_theta_ic && cfg.ic.family != "snapshot")
    throw ValidationError("config: the coupled system needs a theta_ic block");
  if (cfg.ic_theta.family == "snapshot" && cfg.has_theta_ic)
    throw ValidationError("config: restart through ic = snapshot, not theta_ic");

  for (const auto& [key, entry] : kv)
    if (!entry.used)
      fail_line(entry.line, "unknown key '" + key + "'");

  if (cfg.output_dir.empty()) cfg.output_dir = "runs/" + cfg.label;
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Snapshots

namespace {

constexpr char kMagic[4] = {'F', 'R', 'F', 'L'};
constexpr uint32_t kSnapshotVersion = 1;

uint8_t variant_tag(Variant v) { return static_cast<uint8_t>(v); }

Variant variant_from_tag(uint8_t tag) {
  if (tag > static_cast<uint8_t>(Variant::kLinearScaled))
    throw ValidationError("snapshot: unknown variant tag " + std::to_string(tag));
  return static_cast<Variant>(tag);
}

uint8_t field_tag(const std::string& name) {
  if (name == "z") return 0;
  if (name == "w") return 1;
  if (name == "theta") return 2;
  throw ValidationError("snapshot: unknown field name '" + name + "'");
}

std::string field_name(uint8_t tag) {
  switch (tag) {
    case 0: return "z";
    case 1: return "w";
    case 2: return "theta";
    default:
      throw ValidationError("snapshot: unknown field tag " + std::to_string(tag));
  }
}

template <typename T>
void put(std::string& buf, T v) {
  buf.append(reinterpret_cast<const char*>(&v), sizeof v);
}

struct Cursor {
  const std::string& buf;
  size_t pos = 0;
  template <typename T>
  T get() {
    if (pos + sizeof(T) > buf.size())
      throw ValidationError("snapshot: truncated file");
    T v;
    std::memcpy(&v, buf.data() + pos, sizeof v);
    pos += sizeof v;
    return v;
  }
};

void serialize_snapshot(std::string& buf, const ModelParams& params, double time,
                        const std::vector<std::pair<std::string, const double*>>& fields,
                        size_t count_per_field) {
  buf.append(kMagic, 4);
  put<uint32_t>(buf, kSnapshotVersion);
  put<uint32_t>(buf, static_cast<uint32_t>(params.grid.n));
  put<double>(buf, params.grid.box_length);
  put<double>(buf, params.alpha);
  put<double>(buf, params.beta);
  put<uint8_t>(buf, variant_tag(params.variant));
  put<double>(buf, time);
  put<uint32_t>(buf, static_cast<uint32_t>(fields.size()));
  for (const auto& [name, data] : fields) {
    put<uint8_t>(buf, field_tag(name));
    buf.append(reinterpret_cast<const char*>(data), count_per_field * sizeof(double));
  }
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out.good()) throw ValidationError("cannot write '" + path + "'");
}

}  // namespace

void write_snapshot(const SimState& state, const ModelParams& params,
                    const std::string& path) {
  std::vector<std::pair<std::string, std::vector<double>>> images;
  for (uint8_t tag = 0; tag < 3; ++tag) {
    std::string name = field_name(tag);
    auto it = state.fields.find(name);
    if (it == state.fields.end()) continue;
    images.emplace_back(name, inverse_transform(it->second).values);
  }
  if (images.empty()) throw ValidationError("snapshot: state has no fields");
  std::vector<std::pair<std::string, const double*>> refs;
  for (const auto& [name, values] : images) refs.emplace_back(name, values.data());
  std::string buf;
  serialize_snapshot(buf, params, state.time, refs,
                     static_cast<size_t>(params.grid.n) * params.grid.n);
  write_file(path, buf);
}

void write_snapshot(const Snapshot& snap, const std::string& path) {
  std::vector<std::pair<std::string, const double*>> refs;
  for (const auto& [name, values] : snap.fields) refs.emplace_back(name, values.data());
  std::string buf;
  serialize_snapshot(buf, snap.params, snap.time, refs,
                     static_cast<size_t>(snap.params.grid.n) * snap.params.grid.n);
  write_file(path, buf);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open snapshot '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string buf = ss.str();

  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw ValidationError("'" + path + "' is not a snapshot file: bad magic");
  Cursor c{buf, 4};
  uint32_t version = c.get<uint32_t>();
  if (version != kSnapshotVersion)
    throw ValidationError("snapshot '" + path + "': unsupported version " +
                          std::to_string(version));
  uint32_t n = c.get<uint32_t>();
  double box = c.get<double>();
  double alpha = c.get<double>();
  double beta = c.get<double>();
  Variant variant = variant_from_tag(c.get<uint8_t>());
  double time = c.get<double>();
  uint32_t field_count = c.get<uint32_t>();
  if (n < 8 || n % 2 != 0 || n > 16384)
    throw ValidationError("snapshot '" + path + "': implausible grid size " +
                          std::to_string(n));
  if (field_count == 0 || field_count > 3)
    throw ValidationError("snapshot '" + path + "': implausible field count " +
                          std::to_string(field_count));

  Snapshot snap;
  snap.params = make_model_params(variant, alpha, beta,
                                  make_grid(static_cast<int>(n), box));
  snap.time = time;
  const size_t count = static_cast<size_t>(n) * n;
  for (uint32_t f = 0; f < field_count; ++f) {
    std::string name = field_name(c.get<uint8_t>());
    if (c.pos + count * sizeof(double) > buf.size())
      throw ValidationError("snapshot: truncated file");
    std::vector<double> values(count);
    std::memcpy(values.data(), buf.data() + c.pos, count * sizeof(double));
    c.pos += count * sizeof(double);
    snap.fields.emplace_back(std::move(name), std::move(values));
  }
  if (c.pos != buf.size())
    throw ValidationError("snapshot '" + path + "': trailing bytes after fields");
  return snap;
}

SimState Snapshot::state() const {
  SimState s;
  s.time = time;
  for (const auto& [name, values] : fields) {
    ScalarField f = make_scalar_field(params.grid);
    f.values = values;
    s.fields[name] = forward_transform(f);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Series and fits

std::string series_csv_header() {
  return "time,mass,l1,l2,linf,weighted_l2_2,profile_err_l1,profile_err_l2,"
         "u_max,low_shell_frac";
}

namespace {

double aux_or_nan(const DiagnosticRecord& rec, const std::string& key) {
  auto it = rec.aux.find(key);
  return it == rec.aux.end() ? std::nan("") : it->second;
}

}  // namespace

std::string series_csv_line(const SeriesRow& row) {
  const DiagnosticRecord& r = row.rec;
  std::string out = fmt17(row.time);
  for (double v : {r.mass, r.l1, r.l2, r.linf, r.weighted_l2_2,
                   r.profile_error_l1, r.profile_error_l2,
                   aux_or_nan(r, "u_max"), aux_or_nan(r, "low_shell_frac")}) {
    out += ",";
    out += fmt17(v);
  }
  return out;
}

std::vector<SeriesRow> read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open series file '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError("'" + path + "': empty series file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != series_csv_header())
    throw ValidationError("'" + path + "': unexpected series header '" + line + "'");
  std::vector<SeriesRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto parts = split_commas(line);
    if (parts.size() != 10)
      throw ValidationError("'" + path + "' line " + std::to_string(lineno) +
                            ": expected 10 columns, got " +
                            std::to_string(parts.size()));
    std::array<double, 10> v{};
    for (size_t i = 0; i < 10; ++i)
      v[i] = parse_double(parts[i], lineno, "column " + std::to_string(i + 1));
    SeriesRow row;
    row.time = v[0];
    row.rec.time = v[0];
    row.rec.mass = v[1];
    row.rec.l1 = v[2];
    row.rec.l2 = v[3];
    row.rec.linf = v[4];
    row.rec.weighted_l2_2 = v[5];
    row.rec.profile_error_l1 = v[6];
    row.rec.profile_error_l2 = v[7];
    row.rec.aux["u_max"] = v[8];
    row.rec.aux["low_shell_frac"] = v[9];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<FitRow> fit_series(const std::vector<SeriesRow>& series, FitMode mode) {
  struct Quantity {
    const char* name;
    double (*get)(const SeriesRow&);
    bool optional;
  };
  const Quantity quantities[] = {
      {"l1", [](const SeriesRow& r) { return r.rec.l1; }, false},
      {"l2", [](const SeriesRow& r) { return r.rec.l2; }, false},
      {"linf", [](const SeriesRow& r) { return r.rec.linf; }, false},
      {"weighted_l2_2", [](const SeriesRow& r) { return r.rec.weighted_l2_2; }, false},
      {"profile_err_l1", [](const SeriesRow& r) { return r.rec.profile_error_l1; }, true},
      {"profile_err_l2", [](const SeriesRow& r) { return r.rec.profile_error_l2; }, true},
  };

  std::vector<FitRow> out;
  for (const auto& q : quantities) {
    std::vector<TimeSample> samples;
    bool any_finite = false;
    bool any_nonpositive = false;
    for (const auto& row : series) {
      double v = q.get(row);
      if (std::isfinite(v)) any_finite = true;
      if (!(v > 0.0)) any_nonpositive = true;
      samples.push_back({row.time, v});
    }
    if (q.optional && !any_finite) continue;  // diagnostic was switched off

    FitRow fr;
    fr.quantity = q.name;
    if (any_nonpositive) {
      fr.status = "nonpositive values";
    } else {
      try {
        fr.fit = fit_decay_exponent(samples, mode);
        fr.status = "ok";
      } catch (const ValidationError& e) {
        fr.status = e.what();
      }
    }
    if (fr.status != "ok") {
      fr.fit = DecayFit{std::nan(""), std::nan(""), std::nan(""), std::nan(""),
                        std::nan("")};
    }
    out.push_back(std::move(fr));
  }
  return out;
}

std::string fit_csv_text(const std::vector<FitRow>& rows) {
  std::string out =
      "quantity,exponent,intercept,r_squared,window_begin,window_end,status\n";
  for (const auto& r : rows) {
    out += r.quantity;
    for (double v : {r.fit.exponent, r.fit.intercept, r.fit.r_squared,
                     r.fit.window_begin, r.fit.window_end}) {
      out += ",";
      out += fmt17(v);
    }
    out += ",\"" + r.status + "\"\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiment driver

namespace {

ScalarField build_ic(const GridSpec& grid, const IcSpec& ic) {
  if (ic.family == "gaussian")
    return gaussian_bump(grid, ic.amplitude, ic.sigma, ic.center);
  if (ic.family == "dipole")
    return dipole_bump(grid, ic.amplitude, ic.sigma, ic.center);
  if (ic.family == "random")
    return random_band_limited(grid, ic.jmax, ic.amplitude, ic.seed);
  if (ic.family == "zero") return make_scalar_field(grid);
  throw ValidationError("unknown initial-condition family '" + ic.family + "'");
}

std::filesystem::path resolve_output_dir(const RunConfig& cfg) {
  std::filesystem::path p = cfg.output_dir.empty()
                                ? std::filesystem::path("runs") / cfg.label
                                : std::filesystem::path(cfg.output_dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("FRFLOW_OUTPUT_ROOT"))
      if (*root) p = std::filesystem::path(root) / p;
  }
  return p;
}

// Canonical, re-parseable echo of the resolved configuration plus derived
// context as comments. Deliberately free of timestamps so reruns are
// byte-identical.
std::string meta_text(const RunConfig& cfg, int order,
                      const std::array<double, 2>& center,
                      const std::vector<double>& masses,
                      const std::vector<std::string>& warnings) {
  std::string out;
  out += "# frflow 0.1.0 run metadata; parses as a config\n";
  out += "variant = " + variant_name(cfg.variant) + "\n";
  out += "alpha = " + fmt17(cfg.alpha) + "\n";
  out += "beta = " + fmt17(cfg.beta) + "\n";
  out += "n = " + std::to_string(cfg.n) + "\n";
  out += "box = " + fmt17(cfg.box_length) + "\n";
  out += "dt = " + fmt17(cfg.dt) + "\n";
  out += "t_end = " + fmt17(cfg.t_end) + "\n";
  out += "cadence = " + fmt17(cfg.cadence) + "\n";
  out += "label = " + cfg.label + "\n";
  out += "output_dir = " + cfg.output_dir + "\n";
  out += "profile_p = " + fmt_list(cfg.profile_p) + "\n";
  out += "expansion_order = " + std::to_string(order) + "\n";
  out += "profile_center = " + fmt17(center[0]) + "," + fmt17(center[1]) + "\n";
  if (!cfg.snapshot_times.empty())
    out += "snapshots = " + fmt_list(cfg.snapshot_times) + "\n";
  auto ic_block = [&](const std::string& prefix, const IcSpec& ic) {
    out += prefix + " = " + ic.family + "\n";
    if (ic.family == "snapshot") {
      out += prefix + "_path = " + ic.path + "\n";
      return;
    }
    if (ic.family == "zero") return;
    if (ic.family == "random") {
      out += prefix + "_amplitude = " + fmt17(ic.amplitude) + "\n";
      out += prefix + "_jmax = " + std::to_string(ic.jmax) + "\n";
      out += prefix + "_seed = " + std::to_string(ic.seed) + "\n";
      return;
    }
    out += prefix + "_amplitude = " + fmt17(ic.amplitude) + "\n";
    out += prefix + "_sigma = " + fmt17(ic.sigma) + "\n";
    out += prefix + "_center = " + fmt17(ic.center[0]) + "," +
           fmt17(ic.center[1]) + "\n";
  };
  ic_block("ic", cfg.ic);
  if (cfg.has_theta_ic) ic_block("theta_ic", cfg.ic_theta);
  for (const auto& w : warnings) out += "# model warning: " + w + "\n";
  if (masses.size() == 1) {
    out += "# mass0 = " + fmt17(masses[0]) + "\n";
  } else if (masses.size() == 2) {
    out += "# gamma1_0 = " + fmt17(masses[0]) + "\n";
    out += "# gamma2_0 = " + fmt17(masses[1]) + "\n";
  }
  return out;
}

}  // namespace

RunOutputs run_experiment(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path dir = resolve_output_dir(cfg);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw ValidationError("cannot create output directory '" + dir.string() +
                          "': " + ec.message());
  fs::remove(dir / "FAILED", ec);

  try {
    std::vector<std::string> warnings;
    const ModelParams params = make_model_params(
        cfg.variant, cfg.alpha, cfg.beta, make_grid(cfg.n, cfg.box_length),
        &warnings);
    const bool bouss = is_boussinesq(cfg.variant);
    const bool scaled = is_scaled(cfg.variant);
    const int order = resolve_expansion_order(cfg);

    SimState initial;
    if (cfg.ic.family == "snapshot") {
      Snapshot snap = read_snapshot(cfg.ic.path);
      if (snap.params.variant != cfg.variant ||
          !(snap.params.grid == params.grid) ||
          snap.params.alpha != cfg.alpha || snap.params.beta != cfg.beta)
        throw ValidationError("snapshot '" + cfg.ic.path +
                              "' was written for different model parameters");
      initial = snap.state();
      if (!(cfg.t_end > initial.time))
        throw ValidationError("t_end " + fmt17(cfg.t_end) +
                              " does not extend the snapshot time " +
                              fmt17(initial.time));
      if (bouss && initial.fields.size() != 2)
        throw ValidationError("snapshot '" + cfg.ic.path +
                              "' lacks the coupled system's field pair");
    } else if (bouss) {
      initial = make_state(params, build_ic(params.grid, cfg.ic),
                           build_ic(params.grid, cfg.ic_theta));
    } else {
      initial = make_state(params, build_ic(params.grid, cfg.ic));
    }

    const std::string primary = bouss ? "w" : "z";
    std::vector<double> masses;
    masses.push_back(mass(initial.fields.at(primary)));
    if (bouss) masses.push_back(mass(initial.fields.at("theta")));

    std::array<double, 2> center = {0.0, 0.0};
    if (cfg.profile_center) {
      center = *cfg.profile_center;
    } else if (!scaled && order > 0) {
      const std::string& anchor = bouss ? "theta" : primary;
      center = center_of_mass(inverse_transform(initial.fields.at(anchor)));
    }

    std::ofstream series_out(dir / "series.csv", std::ios::trunc);
    series_out << series_csv_header() << "\n";
    std::ofstream theta_out;
    if (bouss) {
      theta_out.open(dir / "series_theta.csv", std::ios::trunc);
      theta_out << series_csv_header() << "\n";
    }

    RunOutputs outputs;
    outputs.directory = dir.string();
    std::set<size_t> snapshots_written;

    auto observe = [&](const SimState& s) {
      const SpectralField& ph = s.fields.at(primary);
      ScalarField pr = inverse_transform(ph);
      const double u_max = max_speed(ph, params.beta);

      SeriesRow row;
      row.time = s.time;
      row.rec.time = s.time;
      row.rec.mass = mass(ph);
      row.rec.l1 = lp_norm(pr, 1.0);
      row.rec.l2 = lp_norm(pr, 2.0);
      row.rec.linf = lp_norm(pr, std::numeric_limits<double>::infinity());
      row.rec.weighted_l2_2 = weighted_l2m_norm(pr, 2);
      row.rec.aux["u_max"] = u_max;
      row.rec.aux["low_shell_frac"] = low_shell_fraction(ph);

      SeriesRow trow;
      if (bouss) {
        const SpectralField& th = s.fields.at("theta");
        ScalarField tr = inverse_transform(th);
        trow.time = s.time;
        trow.rec.time = s.time;
        trow.rec.mass = mass(th);
        trow.rec.l1 = lp_norm(tr, 1.0);
        trow.rec.l2 = lp_norm(tr, 2.0);
        trow.rec.linf = lp_norm(tr, std::numeric_limits<double>::infinity());
        trow.rec.weighted_l2_2 = weighted_l2m_norm(tr, 2);
        trow.rec.aux["u_max"] = u_max;
        trow.rec.aux["low_shell_frac"] = low_shell_fraction(th);

        if (order == 2) {
          for (double p : cfg.profile_p) {
            auto [we, te] = profile_error_boussinesq(
                pr, tr, s.time, masses[0], masses[1], cfg.alpha, p, center);
            if (p == 1.0) {
              row.rec.profile_error_l1 = we;
              trow.rec.profile_error_l1 = te;
            } else {
              row.rec.profile_error_l2 = we;
              trow.rec.profile_error_l2 = te;
            }
          }
        }
      } else if (!scaled && order == 1) {
        for (double p : cfg.profile_p) {
          double e = profile_error_sqg(pr, s.time, masses[0], cfg.alpha, p, center);
          if (p == 1.0)
            row.rec.profile_error_l1 = e;
          else
            row.rec.profile_error_l2 = e;
        }
      }

      if (row.rec.l2 > std::sqrt(row.rec.l1 * row.rec.linf) * (1.0 + 1e-9))
        throw NumericalError("diagnostics row at time " + fmt17(s.time) +
                             " violates the L1-Linf interpolation bound");

      series_out << series_csv_line(row) << "\n";
      outputs.series.push_back(std::move(row));
      if (bouss) {
        theta_out << series_csv_line(trow) << "\n";
        outputs.series_theta.push_back(std::move(trow));
      }

      for (size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
        if (snapshots_written.count(i)) continue;
        if (s.time >= cfg.snapshot_times[i] - 0.5 * cfg.dt) {
          char name[64];
          std::snprintf(name, sizeof name, "snapshot_t%g.frfl",
                        cfg.snapshot_times[i]);
          write_snapshot(s, params, (dir / name).string());
          snapshots_written.insert(i);
        }
      }
    };

    run(params, initial, cfg.t_end, cfg.dt, cfg.cadence, observe);

    series_out.close();
    if (bouss) theta_out.close();
    if (!series_out.good() || (bouss && !theta_out.good()))
      throw ValidationError("cannot write series output under '" + dir.string() + "'");

    const FitMode mode = scaled ? FitMode::kTau : FitMode::kLog1pT;
    write_file((dir / "fit.csv").string(), fit_csv_text(fit_series(outputs.series, mode)));
    if (bouss)
      write_file((dir / "fit_theta.csv").string(),
                 fit_csv_text(fit_series(outputs.series_theta, mode)));
    write_file((dir / "meta.txt").string(),
               meta_text(cfg, order, center, masses, warnings));
    return outputs;
  } catch (const std::exception& e) {
    std::ofstream failed(dir / "FAILED", std::ios::trunc);
    failed << e.what() << "\n";
    throw;
  }
}

// ---------------------------------------------------------------------------
// Presets

namespace {

const std::map<std::string, const char*> kPresets = {
    {"smoke", R"(# tiny end-to-end spin, a few seconds
variant = sqg_physical
alpha = 1.5
beta = 1
n = 64
box = 32
dt = 0.05
t_end = 2
cadence = 0.5
ic = gaussian
ic_amplitude = 1
ic_sigma = 2
label = smoke
)"},
    {"acceptance:sqg_mass", R"(# physical-variable mass conservation over a long horizon
variant = sqg_physical
alpha = 1.5
beta = 1
n = 128
box = 32
dt = 0.05
t_end = 50
cadence = 1
ic = gaussian
ic_amplitude = 1
ic_sigma = 2
label = sqg_mass
)"},
    {"acceptance:boussinesq_mass", R"(# coupled-system theta mass conservation
variant = boussinesq_physical
alpha = 1.5
beta = 1
n = 128
box = 32
dt = 0.05
t_end = 50
cadence = 1
ic = dipole
ic_amplitude = 0.5
ic_sigma = 2
theta_ic = gaussian
theta_ic_amplitude = 1
theta_ic_sigma = 2
label = boussinesq_mass
)"},
    {"acceptance:sqg_scaled_mass", R"(# rescaled mass follows the closed-form exponential
variant = sqg_scaled
alpha = 1.5
beta = 1
n = 128
box = 32
dt = 0.01
tau_end = 3
cadence = 0.25
ic = gaussian
ic_amplitude = 1
ic_sigma = 2
label = sqg_scaled_mass
)"},
    {"acceptance:boussinesq_scaled_mass", R"(# rescaled coupled system: gamma2 growth law
variant = boussinesq_scaled
alpha = 1.4
beta = 1
n = 128
box = 32
dt = 0.01
tau_end = 3
cadence = 0.25
ic = dipole
ic_amplitude = 0.5
ic_sigma = 2
theta_ic = gaussian
theta_ic_amplitude = 1
theta_ic_sigma = 2
label = boussinesq_scaled_mass
)"},
    {"acceptance:sqg_monotone", R"(# Lp monotonicity run
variant = sqg_physical
alpha = 1.5
beta = 1
n = 256
box = 64
dt = 0.05
t_end = 50
cadence = 1
ic = gaussian
ic_amplitude = 1
ic_sigma = 2
label = sqg_monotone
)"},
    {"acceptance:sqg_decay", R"(# sharp decay exponent and profile convergence run
variant = sqg_physical
alpha = 1.5
beta = 1
n = 512
box = 64
dt = 0.05
t_end = 80
cadence = 1
ic = gaussian
ic_amplitude = 1
ic_sigma = 2
label = sqg_decay
)"},
    {"acceptance:sqg_decay_box", R"(# box-doubling truncation control for the decay run
variant = sqg_physical
alpha = 1.5
beta = 1
n = 512
box = 128
dt = 0.05
t_end = 80
cadence = 1
ic = gaussian
ic_amplitude = 1
ic_sigma = 2
label = sqg_decay_box
)"},
    {"acceptance:boussinesq_decay", R"(# coupled-system decay exponents and two-term profile
variant = boussinesq_physical
alpha = 1.4
beta = 1
n = 512
box = 64
dt = 0.04
t_end = 70
cadence = 1
ic = dipole
ic_amplitude = 0.5
ic_sigma = 2
theta_ic = gaussian
theta_ic_amplitude = 1
theta_ic_sigma = 2
label = boussinesq_decay
)"},
    {"acceptance:determinism", R"(# small deterministic run with a mid-course snapshot
variant = sqg_physical
alpha = 1.5
beta = 1
n = 64
box = 32
dt = 0.05
t_end = 10
cadence = 1
ic = gaussian
ic_amplitude = 1
ic_sigma = 2
profile_center = 0,0
snapshots = 5
label = determinism
)"},
};

}  // namespace

std::string preset_config_text(const std::string& name) {
  auto it = kPresets.find(name);
  if (it == kPresets.end()) {
    std::string msg = "unknown preset '" + name + "'; available:";
    for (const auto& [k, v] : kPresets) msg += " " + k;
    throw ValidationError(msg);
  }
  return it->second;
}

std::vector<std::string> list_presets() {
  std::vector<std::string> names;
  for (const auto& [k, v] : kPresets) names.push_back(k);
  return names;
}

}  // namespace frflow
