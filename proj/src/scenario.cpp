#include "kgfield/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "kgfield/amplitude.hpp"
#include "kgfield/bessel.hpp"
#include "kgfield/csv.hpp"
#include "kgfield/currents.hpp"
#include "kgfield/em.hpp"
#include "kgfield/gauge.hpp"
#include "kgfield/inner_products.hpp"
#include "kgfield/limits.hpp"
#include "kgfield/localization.hpp"
#include "kgfield/random_fields.hpp"
#include "kgfield/state_io.hpp"

namespace kgfield {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

// ---- schema ----

void allow(const json& obj, const std::string& where, const std::set<std::string>& keys) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : obj.items())
    if (!keys.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

void require(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing required key '" + key + "'");
}

void expect_number(const json& obj, const std::string& where, const std::string& key) {
  if (obj.contains(key) && !obj[key].is_number()) throw ConfigError(where + "." + key + ": expected a number");
}

void expect_int(const json& obj, const std::string& where, const std::string& key) {
  if (obj.contains(key) && !obj[key].is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
}

void expect_string(const json& obj, const std::string& where, const std::string& key,
                   const std::set<std::string>& choices = {}) {
  if (!obj.contains(key)) return;
  if (!obj[key].is_string()) throw ConfigError(where + "." + key + ": expected a string");
  if (!choices.empty() && !choices.count(obj[key].get<std::string>()))
    throw ConfigError(where + "." + key + ": unsupported value '" + obj[key].get<std::string>() + "'");
}

void expect_numbers(const json& obj, const std::string& where, const std::string& key, std::size_t min_len = 1,
                    std::size_t max_len = 1000000) {
  if (!obj.contains(key)) return;
  const json& v = obj[key];
  if (!v.is_array() || v.size() < min_len || v.size() > max_len)
    throw ConfigError(where + "." + key + ": expected an array of " + std::to_string(min_len) + ".." +
                      std::to_string(max_len) + " numbers");
  for (const auto& x : v)
    if (!x.is_number()) throw ConfigError(where + "." + key + ": expected numbers");
}

void expect_number_or_numbers(const json& obj, const std::string& where, const std::string& key) {
  if (obj.contains(key) && !obj[key].is_number()) expect_numbers(obj, where, key, 1, 3);
}

void validate_model(const json& m) {
  const std::string w = "model";
  allow(m, w, {"d", "L", "N", "M", "kappa", "a", "t0"});
  expect_int(m, w, "d");
  expect_number_or_numbers(m, w, "L");
  if (m.contains("N") && !m["N"].is_number_integer()) {
    expect_numbers(m, w, "N", 1, 3);
    for (const auto& x : m["N"])
      if (!x.is_number_integer()) throw ConfigError("model.N: expected integers");
  }
  for (const char* k : {"M", "kappa", "a", "t0"}) expect_number(m, w, k);
}

const std::set<std::string> kConstructions{"gaussian-packet", "plane-waves", "localized-state", "from-file",
                                           "random", "gaussian-amplitude"};

void validate_gaussian_poly(const json& g, const std::string& w) {
  allow(g, w, {"center", "width", "scale"});
  expect_numbers(g, w, "center", 1, 3);
  expect_number(g, w, "width");
  expect_numbers(g, w, "scale", 2, 2);
}

void validate_field(const json& f) {
  const std::string w = "field";
  if (!f.is_object()) throw ConfigError("field: expected an object");
  require(f, w, "construction");
  expect_string(f, w, "construction", kConstructions);
  const std::string c = f["construction"];
  if (c == "gaussian-packet") {
    allow(f, w, {"construction", "center", "k0", "sigma", "amplitude", "preparation"});
    expect_numbers(f, w, "center", 1, 3);
    expect_numbers(f, w, "k0", 1, 3);
    expect_number(f, w, "sigma");
    expect_numbers(f, w, "amplitude", 2, 2);
    expect_string(f, w, "preparation", {"positive", "negative", "nonrelativistic"});
  } else if (c == "plane-waves") {
    allow(f, w, {"construction", "modes"});
    require(f, w, "modes");
    if (!f["modes"].is_array() || f["modes"].empty()) throw ConfigError("field.modes: expected a non-empty array");
    for (const auto& m : f["modes"]) {
      allow(m, "field.modes[]", {"epsilon", "k", "coeff"});
      expect_int(m, "field.modes[]", "epsilon");
      expect_numbers(m, "field.modes[]", "k", 1, 3);
      expect_numbers(m, "field.modes[]", "coeff", 2, 2);
    }
  } else if (c == "localized-state") {
    allow(f, w, {"construction", "epsilon", "y"});
    expect_int(f, w, "epsilon");
    expect_numbers(f, w, "y", 1, 3);
  } else if (c == "from-file") {
    allow(f, w, {"construction", "path"});
    require(f, w, "path");
    expect_string(f, w, "path");
  } else if (c == "random") {
    allow(f, w, {"construction", "kind", "sigma"});
    expect_string(f, w, "kind", {"general", "real", "localized"});
    expect_number(f, w, "sigma");
  } else if (c == "gaussian-amplitude") {
    allow(f, w, {"construction", "plus", "minus", "order"});
    if (!f.contains("plus") && !f.contains("minus")) throw ConfigError("field: gaussian-amplitude needs plus or minus");
    if (f.contains("plus")) validate_gaussian_poly(f["plus"], "field.plus");
    if (f.contains("minus")) validate_gaussian_poly(f["minus"], "field.minus");
    expect_int(f, w, "order");
  }
}

const std::map<std::string, std::set<std::string>> kTaskKeys{
    {"inner_a", {"times"}},
    {"rho_a", {"times"}},
    {"total_probability", {"times"}},
    {"currents", {"times", "kind"}},
    {"continuity", {"times", "kind"}},
    {"wavefunction", {}},
    {"localization_profile", {"r_min", "r_max"}},
    {"gauge", {"thetas", "parameter"}},
    {"limits", {"which", "masses", "k0", "sigma", "time_offset"}},
    {"em", {"background", "q", "A0", "B", "times"}},
    {"two_mode_oracle", {"events", "boost", "a"}},
    {"pointwise_currents", {"events", "a"}},
    {"invariance", {"boost"}},
};

void validate_task(const json& t, std::size_t i) {
  const std::string w = "tasks[" + std::to_string(i) + "]";
  if (!t.is_object()) throw ConfigError(w + ": expected an object");
  require(t, w, "task");
  expect_string(t, w, "task");
  const std::string name = t["task"];
  const auto it = kTaskKeys.find(name);
  if (it == kTaskKeys.end()) throw ConfigError(w + ": unknown task '" + name + "'");
  std::set<std::string> keys = it->second;
  keys.insert("task");
  allow(t, w, keys);
  expect_numbers(t, w, "times");
  expect_string(t, w, "kind", {"Ja", "calJa"});
  expect_string(t, w, "which", {"Ja", "calJa"});
  expect_numbers(t, w, "thetas");
  expect_string(t, w, "parameter");
  expect_numbers(t, w, "masses", 4);
  expect_numbers(t, w, "k0", 1, 3);
  expect_number(t, w, "sigma");
  expect_number(t, w, "time_offset");
  expect_string(t, w, "background", {"zero", "constant", "periodic"});
  expect_number(t, w, "q");
  expect_numbers(t, w, "A0", 1, 3);
  expect_number(t, w, "B");
  expect_numbers(t, w, "boost", 1, 3);
  expect_number(t, w, "a");
  expect_number(t, w, "r_min");
  expect_number(t, w, "r_max");
  if (t.contains("events")) {
    if (t["events"].is_number_integer()) {
      if (t["events"].get<long long>() < 1) throw ConfigError(w + ".events: must be positive");
    } else {
      if (!t["events"].is_array()) throw ConfigError(w + ".events: expected a count or a list of events");
      for (const auto& e : t["events"]) {
        if (!e.is_array() || e.size() != 4) throw ConfigError(w + ".events: each event needs 4 numbers");
        for (const auto& x : e)
          if (!x.is_number()) throw ConfigError(w + ".events: expected numbers");
      }
    }
  }
}

void validate_sweep(const json& s) {
  const std::string w = "sweep";
  allow(s, w, {"axis", "values", "range", "ladder", "observable", "boost", "which"});
  require(s, w, "axis");
  require(s, w, "observable");
  expect_string(s, w, "axis", {"a", "M", "theta", "quadrature-order"});
  expect_string(s, w, "observable",
                {"total_probability", "inner_a", "limit_deviation", "gauge_norm", "invariance_rel_dev"});
  expect_string(s, w, "which", {"Ja", "calJa"});
  expect_numbers(s, w, "boost", 1, 3);
  int sources = int(s.contains("values")) + int(s.contains("range")) + int(s.contains("ladder"));
  if (sources != 1) throw ConfigError("sweep: give exactly one of values, range, ladder");
  expect_numbers(s, w, "values");
  if (s.contains("range")) {
    allow(s["range"], "sweep.range", {"from", "to", "count"});
    for (const char* k : {"from", "to", "count"}) require(s["range"], "sweep.range", k);
    expect_number(s["range"], "sweep.range", "from");
    expect_number(s["range"], "sweep.range", "to");
    expect_int(s["range"], "sweep.range", "count");
    if (s["range"]["count"].get<int>() < 2) throw ConfigError("sweep.range.count: must be at least 2");
  }
  if (s.contains("ladder")) {
    allow(s["ladder"], "sweep.ladder", {"M0", "count"});
    require(s["ladder"], "sweep.ladder", "M0");
    expect_number(s["ladder"], "sweep.ladder", "M0");
    expect_int(s["ladder"], "sweep.ladder", "count");
  }
  const std::string axis = s["axis"], obs = s["observable"];
  const std::map<std::string, std::set<std::string>> ok{
      {"a", {"total_probability", "inner_a"}},
      {"M", {"total_probability", "inner_a", "limit_deviation"}},
      {"theta", {"gauge_norm"}},
      {"quadrature-order", {"invariance_rel_dev"}}};
  if (!ok.at(axis).count(obs)) throw ConfigError("sweep: observable '" + obs + "' is not available on axis '" + axis + "'");
}

void validate(const json& doc) {
  allow(doc, "config", {"seed", "model", "field", "tasks", "output", "sweep"});
  if (doc.contains("seed") && !doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
    throw ConfigError("config.seed: expected an integer");
  if (doc.contains("model")) validate_model(doc["model"]);
  require(doc, "config", "field");
  validate_field(doc["field"]);
  const std::string c = doc["field"]["construction"];
  if (c != "from-file") require(doc, "config", "model");
  if (doc.contains("tasks")) {
    if (!doc["tasks"].is_array()) throw ConfigError("config.tasks: expected an array");
    for (std::size_t i = 0; i < doc["tasks"].size(); ++i) validate_task(doc["tasks"][i], i);
  }
  if (doc.contains("output")) {
    allow(doc["output"], "output", {"directory", "formats"});
    expect_string(doc["output"], "output", "directory");
    if (doc["output"].contains("formats")) {
      const json& f = doc["output"]["formats"];
      if (!f.is_array()) throw ConfigError("output.formats: expected an array");
      for (const auto& x : f)
        if (!x.is_string() || (x != "csv" && x != "json")) throw ConfigError("output.formats: entries must be csv or json");
    }
  }
  if (doc.contains("sweep")) validate_sweep(doc["sweep"]);
}

// ---- config access ----

Vec3 vec3(const json& v, const Vec3& def = {0, 0, 0}) {
  if (v.is_null()) return def;
  Vec3 r{0, 0, 0};
  for (std::size_t i = 0; i < v.size() && i < 3; ++i) r[i] = v[i].get<double>();
  return r;
}

template <class T>
T get_or(const json& obj, const char* key, T def) {
  return obj.contains(key) ? obj[key].get<T>() : def;
}

std::vector<double> times_of(const json& task, double t0) {
  if (!task.contains("times")) return {t0};
  return task["times"].get<std::vector<double>>();
}

struct Model {
  std::optional<Lattice> lattice;
  ModelParams params{1.0, 1.0, 0.0};
  int dim = 1;
  double t0 = 0.0;
};

Model read_model(const json& doc) {
  Model m;
  if (!doc.contains("model")) return m;
  const json& j = doc["model"];
  m.dim = get_or(j, "d", 1);
  try {
    m.params = ModelParams(get_or(j, "M", 1.0), get_or(j, "kappa", 1.0), get_or(j, "a", 0.0));
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  m.t0 = get_or(j, "t0", 0.0);
  if (j.contains("L") || j.contains("N")) {
    if (!j.contains("L") || !j.contains("N")) throw ConfigError("model: L and N must be given together");
    std::array<double, 3> L{1, 1, 1};
    std::array<int, 3> N{1, 1, 1};
    for (int ax = 0; ax < m.dim && ax < 3; ++ax) {
      L[ax] = j["L"].is_number() ? j["L"].get<double>() : j["L"].at(std::min<std::size_t>(ax, j["L"].size() - 1)).get<double>();
      N[ax] = j["N"].is_number() ? j["N"].get<int>() : j["N"].at(std::min<std::size_t>(ax, j["N"].size() - 1)).get<int>();
    }
    try {
      m.lattice = Lattice(m.dim, L, N);
    } catch (const PreconditionError& e) {
      throw ConfigError(std::string("model: ") + e.what());
    }
  }
  return m;
}

struct Field {
  std::optional<LatticeField> lattice_field;
  std::optional<PlaneWaveField> planewaves;
  std::optional<AmplitudeField> amplitude;
  std::optional<LocalizedState> localized;
};

const Lattice& need_lattice(const Model& m) {
  if (!m.lattice) throw ConfigError("model: this field construction needs L and N");
  return *m.lattice;
}

GaussianPoly gaussian_poly(const json& g) {
  GaussianPoly p;
  p.center = vec3(g.value("center", json()));
  p.width = get_or(g, "width", 1.0);
  if (g.contains("scale")) p.scale = {g["scale"][0].get<double>(), g["scale"][1].get<double>()};
  return p;
}

Field build_field(const json& doc, const Model& m, unsigned long long seed, const std::string& base_dir) {
  const json& f = doc["field"];
  const std::string c = f["construction"];
  Field out;
  if (c == "gaussian-packet") {
    PacketSpec s;
    s.center = vec3(f.value("center", json()));
    s.k0 = vec3(f.value("k0", json()));
    s.sigma = get_or(f, "sigma", 1.0);
    if (f.contains("amplitude")) s.amplitude = {f["amplitude"][0].get<double>(), f["amplitude"][1].get<double>()};
    const std::string prep = get_or<std::string>(f, "preparation", "positive");
    const Lattice& L = need_lattice(m);
    out.lattice_field = prep == "nonrelativistic" ? nonrelativistic_packet(L, m.params, s, m.t0)
                                                  : gaussian_packet(L, m.params, s, prep == "negative" ? -1 : 1, m.t0);
  } else if (c == "plane-waves") {
    std::vector<PlaneWaveMode> modes;
    for (const auto& j : f["modes"]) {
      PlaneWaveMode pm;
      pm.epsilon = get_or(j, "epsilon", 1);
      pm.k = vec3(j.value("k", json()));
      if (j.contains("coeff")) pm.coeff = {j["coeff"][0].get<double>(), j["coeff"][1].get<double>()};
      modes.push_back(pm);
    }
    out.planewaves = PlaneWaveField(m.params, m.dim, modes);
  } else if (c == "localized-state") {
    const Lattice& L = need_lattice(m);
    out.localized = localized_state(get_or(f, "epsilon", 1), vec3(f.value("y", json())), L, m.params, m.t0);
    out.lattice_field = out.localized->field;
  } else if (c == "from-file") {
    fs::path p = f["path"].get<std::string>();
    if (p.is_relative()) p = fs::path(base_dir) / p;
    out.lattice_field = load_state(p.string());
  } else if (c == "random") {
    Rng rng(seed);
    const Lattice& L = need_lattice(m);
    const std::string kind = get_or<std::string>(f, "kind", "general");
    if (kind == "real") out.lattice_field = random_real_field(L, m.params, rng, m.t0);
    else if (kind == "localized") out.lattice_field = random_localized_field(L, m.params, rng, get_or(f, "sigma", 1.0), m.t0);
    else out.lattice_field = random_field(L, m.params, rng, m.t0);
  } else if (c == "gaussian-amplitude") {
    std::optional<GaussianPoly> plus, minus;
    if (f.contains("plus")) plus = gaussian_poly(f["plus"]);
    if (f.contains("minus")) minus = gaussian_poly(f["minus"]);
    out.amplitude = AmplitudeField(m.params, m.dim, plus, minus, get_or(f, "order", 64));
  }
  return out;
}

// ---- output ----

void flatten_params(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten_params(v, prefix.empty() ? k : prefix + "." + k, out);
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

class Writer {
public:
  Writer(const ScenarioConfig& cfg, const RunOptions& opt, unsigned long long seed) {
    const json& doc = cfg.doc;
    dir_ = opt.out_dir;
    if (dir_.empty() && doc.contains("output") && doc["output"].contains("directory"))
      dir_ = doc["output"]["directory"].get<std::string>();
    if (dir_.empty()) dir_ = ".";
    std::set<std::string> formats{"csv", "json"};
    if (doc.contains("output") && doc["output"].contains("formats"))
      formats = doc["output"]["formats"].get<std::set<std::string>>();
    if (!opt.format.empty()) formats = {opt.format};
    csv_ = formats.count("csv") > 0;
    json_ = formats.count("json") > 0;
    meta_.config_hash = config_hash(cfg.text);
    meta_.timestamp = opt.timestamp;
    json echo = doc;
    echo["seed"] = seed;
    flatten_params(echo, "", meta_.params);
    summary_["tool"] = kToolVersion;
    summary_["config_hash"] = meta_.config_hash;
    summary_["seed"] = seed;
    summary_["parameters"] = echo;
    summary_["results"] = ojson::array();
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw PreconditionError("cannot create output directory '" + dir_ + "': " + ec.message());
  }

  void table(const std::string& name, const CsvTable& t, ojson& result) {
    if (csv_) {
      const std::string path = (fs::path(dir_) / (name + ".csv")).string();
      t.save(path, meta_);
      files_.push_back(path);
      result["csv"] = name + ".csv";
    }
  }

  void result(ojson r) { summary_["results"].push_back(std::move(r)); }

  RunResult finish() {
    if (json_) {
      const std::string path = (fs::path(dir_) / "summary.json").string();
      std::ofstream out(path);
      if (!out) throw PreconditionError("cannot write '" + path + "'");
      out << summary_.dump(2) << '\n';
      files_.push_back(path);
    }
    return {files_, summary_};
  }

private:
  std::string dir_;
  bool csv_ = true, json_ = true;
  CsvMeta meta_;
  ojson summary_;
  std::vector<std::string> files_;
};

std::vector<std::string> position_columns(int dim) {
  std::vector<std::string> c;
  const char* names[] = {"x", "y", "z"};
  for (int ax = 0; ax < dim; ++ax) c.push_back(names[ax]);
  return c;
}

std::vector<double> position_values(const Lattice& L, std::size_t i) {
  const Vec3 x = L.position(i);
  return std::vector<double>(x.begin(), x.begin() + L.dim());
}

const LatticeField& need_lattice_field(const Field& f, const std::string& task) {
  if (!f.lattice_field) throw PreconditionError("task '" + task + "' needs a lattice field");
  return *f.lattice_field;
}

const PlaneWaveField& need_planewaves(const Field& f, const std::string& task) {
  if (!f.planewaves) throw PreconditionError("task '" + task + "' needs a plane-waves field");
  return *f.planewaves;
}

std::vector<Event> events_of(const json& task, int dim, unsigned long long seed) {
  std::vector<Event> ev;
  if (task.contains("events") && task["events"].is_array()) {
    for (const auto& e : task["events"]) ev.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>(), e[3].get<double>()});
    return ev;
  }
  const long long n = get_or<long long>(task, "events", 100);
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (long long i = 0; i < n; ++i) {
    Event e{u(rng), 0, 0, 0};
    for (int ax = 0; ax < dim; ++ax) e[ax + 1] = u(rng);
    ev.push_back(e);
  }
  return ev;
}

std::string tag(std::size_t i) {
  std::ostringstream s;
  s << std::setw(3) << std::setfill('0') << i;
  return s.str();
}

void run_task(const json& task, std::size_t index, const Field& field, const Model& model, Writer& w,
              unsigned long long seed) {
  const std::string name = task["task"];
  const std::string prefix = "task" + tag(index) + "_" + name;
  ojson r;
  r["task"] = name;

  if (name == "inner_a" || name == "total_probability") {
    const LatticeField& f = need_lattice_field(field, name);
    CsvTable t({"t", "total_probability", "inner_a_re", "inner_a_im", "total_Ja0_re"});
    ojson vals = ojson::array();
    for (double tt : times_of(task, f.t0())) {
      const cplx n = inner_a(f, f, tt);
      const double tp = total_probability(f, tt);
      const cplx tj = total_Ja0(f, tt);
      t.add_row(std::vector<double>{tt, tp, n.real(), n.imag(), tj.real()});
      vals.push_back({{"t", tt}, {"total_probability", tp}, {"inner_a", {n.real(), n.imag()}}, {"total_Ja0", tj.real()}});
    }
    r["values"] = vals;
    w.table(prefix, t, r);
  } else if (name == "rho_a") {
    const LatticeField& f = need_lattice_field(field, name);
    const Lattice& L = f.lattice();
    ojson vals = ojson::array();
    std::size_t k = 0;
    for (double tt : times_of(task, f.t0())) {
      auto cols = position_columns(L.dim());
      cols.push_back("rho_a");
      CsvTable t(cols);
      const RGrid rho = rho_a(f, tt);
      for (std::size_t i = 0; i < L.size(); ++i) {
        auto row = position_values(L, i);
        row.push_back(rho[i]);
        t.add_row(row);
      }
      ojson v{{"t", tt}, {"total_probability", total_probability(f, tt)}};
      w.table(prefix + "_t" + tag(k++), t, v);
      vals.push_back(v);
    }
    r["values"] = vals;
  } else if (name == "currents" || name == "continuity") {
    const LatticeField& f = need_lattice_field(field, name);
    const std::string kind = get_or<std::string>(task, "kind", "Ja");
    const CurrentChoice which = kind == "Ja" ? CurrentChoice::Ja : CurrentChoice::calJa;
    ojson vals = ojson::array();
    std::size_t k = 0;
    for (double tt : times_of(task, f.t0())) {
      ojson v{{"t", tt}, {"kind", kind}, {"continuity_residual", continuity_residual(f, tt, which)}};
      if (name == "currents") {
        const Lattice P = dealiasing_lattice(f.lattice());
        auto cols = position_columns(P.dim());
        std::vector<std::vector<double>> comps;
        if (which == CurrentChoice::Ja) {
          const ComplexCurrent J = current_Ja(f, tt);
          for (std::size_t mu = 0; mu < J.components.size(); ++mu) {
            cols.push_back("J" + std::to_string(mu) + "_re");
            cols.push_back("J" + std::to_string(mu) + "_im");
            RGrid re, im;
            for (const auto& x : J.components[mu]) re.push_back(x.real()), im.push_back(x.imag());
            comps.push_back(re);
            comps.push_back(im);
          }
        } else {
          const RealCurrent J = current_calJa(f, tt);
          for (std::size_t mu = 0; mu < J.components.size(); ++mu) {
            cols.push_back("calJ" + std::to_string(mu));
            comps.push_back(J.components[mu]);
          }
        }
        CsvTable t(cols);
        for (std::size_t i = 0; i < P.size(); ++i) {
          auto row = position_values(P, i);
          for (const auto& c : comps) row.push_back(c[i]);
          t.add_row(row);
        }
        w.table(prefix + "_t" + tag(k++), t, v);
      }
      vals.push_back(v);
    }
    r["values"] = vals;
  } else if (name == "wavefunction") {
    const LatticeField& f = need_lattice_field(field, name);
    const auto [fp, fm] = wavefunction_f(f);
    auto cols = position_columns(f.lattice().dim());
    for (const char* c : {"f_plus_re", "f_plus_im", "f_minus_re", "f_minus_im"}) cols.push_back(c);
    CsvTable t(cols);
    for (std::size_t i = 0; i < fp.size(); ++i) {
      auto row = position_values(f.lattice(), i);
      row.insert(row.end(), {fp[i].real(), fp[i].imag(), fm[i].real(), fm[i].imag()});
      t.add_row(row);
    }
    w.table(prefix, t, r);
  } else if (name == "localization_profile") {
    if (!field.localized) throw PreconditionError("localization_profile needs a localized-state field");
    const LocalizedState& s = *field.localized;
    const Lattice& L = s.field.lattice();
    if (L.dim() != 3) throw PreconditionError("localization_profile needs a 3-D lattice");
    const double rmin = get_or(task, "r_min", 0.5 / model.params.mass());
    const double rmax = get_or(task, "r_max", 3.0 / model.params.mass());
    const CGrid psi = s.dirac_normalized().evaluate(s.field.t0()).psi;
    std::map<double, std::pair<double, double>> radial;
    for (std::size_t i = 0; i < L.size(); ++i) {
      const Vec3 x = L.position(i);
      double r2 = 0;
      for (int ax = 0; ax < 3; ++ax) {
        const double d = x[ax] - s.y[ax];
        r2 += d * d;
      }
      const double rr = std::sqrt(r2);
      if (rr < rmin || rr > rmax) continue;
      auto& slot = radial[std::round(rr * 1e9) / 1e9];
      slot.first += psi[i].real();
      slot.second += 1.0;
    }
    CsvTable t({"r", "lattice_profile", "bessel_profile", "rel_dev"});
    double worst = 0;
    for (const auto& [rr, acc] : radial) {
      const double v = acc.first / acc.second, b = besselK_profile(rr, s.field.params());
      const double d = std::abs(v - b) / std::abs(b);
      worst = std::max(worst, d);
      t.add_row(std::vector<double>{rr, v, b, d});
    }
    r["max_rel_dev"] = worst;
    w.table(prefix, t, r);
  } else if (name == "gauge") {
    const LatticeField& f = need_lattice_field(field, name);
    const double a = f.params().a();
    const cplx n0 = inner_a(f, f, f.t0());
    CsvTable t({"theta", "inner_a_re", "norm_rel_dev"});
    for (double th : task.value("thetas", std::vector<double>{0.5, 1.0, 2.0})) {
      const cplx n = inner_a(gauge_transform(f, th, a), gauge_transform(f, th, a), f.t0());
      t.add_row(std::vector<double>{th, n.real(), std::abs(n - n0) / std::abs(n0)});
    }
    r["generator_residual"] = generator_check(f, a, 1e-5);
    if (task.contains("parameter")) {
      GroupClass g;
      try {
        g = group_classify(parse_gauge_parameter(task["parameter"].get<std::string>()));
      } catch (const PreconditionError& e) {
        throw ConfigError(std::string("gauge.parameter: ") + e.what());
      }
      r["group"] = g.kind == GroupClass::Kind::U1 ? "U(1)" : "R+";
      if (g.period) r["period"] = *g.period;
      r["witness"] = g.witness;
    }
    w.table(prefix, t, r);
  } else if (name == "limits") {
    LimitSweep sw{need_lattice(model), {}, task.value("masses", LimitSweep::ladder(16.0, 6))};
    sw.profile.k0 = vec3(task.value("k0", json::array({2.0})));
    sw.profile.sigma = get_or(task, "sigma", 1.0);
    sw.time_offset = get_or(task, "time_offset", 0.3);
    const std::string which = get_or<std::string>(task, "which", "Ja");
    const LimitTable lt = limit_deviation(sw, which == "Ja" ? CurrentChoice::Ja : CurrentChoice::calJa, model.params.a());
    CsvTable t({"M", "rel_dev_rho", "rel_dev_j"});
    for (const auto& row : lt.rows) t.add_row(std::vector<double>{row.mass, row.rel_dev_rho, row.rel_dev_j});
    t.add_footer("slope_rho = " + format_number(lt.slope_rho));
    t.add_footer("slope_j = " + format_number(lt.slope_j));
    r["slope_rho"] = lt.slope_rho;
    r["slope_j"] = lt.slope_j;
    w.table(prefix, t, r);
  } else if (name == "em") {
    const LatticeField& f = need_lattice_field(field, name);
    const std::string bgk = get_or<std::string>(task, "background", "periodic");
    const double q = get_or(task, "q", 1.0);
    const EMBackground bg = bgk == "zero" ? EMBackground::zero(f.lattice(), q)
                            : bgk == "constant" ? EMBackground::constant(f.lattice(), q, vec3(task.value("A0", json())))
                                                : EMBackground::periodic_field(f.lattice(), q, get_or(task, "B", 1.0));
    const DenseOperator op = build_Dq(bg, f.params());
    const FieldSamples s = f.evaluate(f.t0());
    const cplx n0 = em_inner_and_evolve(s.psi, s.psidot, op, f.params(), 0.0).inner;
    ojson vals = ojson::array();
    double drift = 0;
    for (double tt : times_of(task, f.t0())) {
      const cplx n = em_inner_and_evolve(s.psi, s.psidot, op, f.params(), tt - f.t0()).inner;
      drift = std::max(drift, std::abs(n - n0) / std::abs(n0));
      vals.push_back({{"t", tt}, {"inner_a", {n.real(), n.imag()}}});
    }
    CsvTable t({"index", "eigenvalue"});
    for (Eigen::Index i = 0; i < op.eigenvalues().size(); ++i) t.add_row(std::vector<double>{double(i), op.eigenvalues()[i]});
    r["values"] = vals;
    r["drift"] = drift;
    r["hermiticity_residual"] = op.hermiticity_residual();
    r["min_eigenvalue"] = op.eigenvalues().minCoeff();
    w.table(prefix + "_spectrum", t, r);
  } else if (name == "two_mode_oracle") {
    const PlaneWaveField& pw = need_planewaves(field, name);
    if (pw.modes().size() != 2 || pw.modes()[0].epsilon != 1 || pw.modes()[1].epsilon != 1)
      throw PreconditionError("two_mode_oracle needs exactly two positive-energy modes");
    TwoModeOracle o;
    o.k1 = pw.modes()[0].k;
    o.k2 = pw.modes()[1].k;
    o.c1 = pw.modes()[0].coeff;
    o.c2 = pw.modes()[1].coeff;
    o.params = pw.params();
    o.dim = pw.dim();
    const double a = get_or(task, "a", pw.params().a());
    CsvTable t({"x0", "x1", "x2", "x3", "calJ0", "calJ1", "calJ2", "calJ3", "J0_re", "J0_im", "J1_re", "J1_im",
                "K0", "K1", "K2", "K3", "Ksq", "div_calJ", "div_J"});
    for (const Event& e : events_of(task, pw.dim(), seed)) {
      const TwoModeValues v = two_mode_oracle(o, a, e);
      t.add_row(std::vector<double>{e[0], e[1], e[2], e[3], v.calJ[0], v.calJ[1], v.calJ[2], v.calJ[3], v.J[0].real(),
                                    v.J[0].imag(), v.J[1].real(), v.J[1].imag(), v.K[0], v.K[1], v.K[2], v.K[3], v.Ksq,
                                    v.div_calJ, v.div_J});
    }
    const NonCovariance nc = noncovariance_demo(o, Boost(vec3(task.value("boost", json::array({0.5})))));
    r["Ksq_before"] = nc.Ksq_before;
    r["Ksq_after"] = nc.Ksq_after;
    r["Ksq_delta"] = nc.delta;
    r["k1k2_before"] = nc.k1k2_before;
    r["k1k2_after"] = nc.k1k2_after;
    w.table(prefix, t, r);
  } else if (name == "pointwise_currents") {
    const PlaneWaveField& pw = need_planewaves(field, name);
    const double a = get_or(task, "a", pw.params().a());
    CsvTable t({"x0", "x1", "x2", "x3", "J0_re", "J0_im", "J1_re", "J1_im", "J2_re", "J2_im", "J3_re", "J3_im", "calJ0",
                "calJ1", "calJ2", "calJ3", "div_J_re", "div_calJ"});
    for (const Event& e : events_of(task, pw.dim(), seed)) {
      const auto J = current_Ja_at(pw, a, e);
      const FourVector C = current_calJa_at(pw, a, e);
      const cplx dj = divergence_Ja_at(pw, a, e);
      t.add_row(std::vector<double>{e[0], e[1], e[2], e[3], J[0].real(), J[0].imag(), J[1].real(), J[1].imag(),
                                    J[2].real(), J[2].imag(), J[3].real(), J[3].imag(), C[0], C[1], C[2], C[3],
                                    dj.real(), divergence_calJa_at(pw, a, e)});
    }
    w.table(prefix, t, r);
  } else if (name == "invariance") {
    if (!field.amplitude) throw PreconditionError("invariance needs a gaussian-amplitude field");
    const InvarianceResult ir =
        invariance_check(*field.amplitude, *field.amplitude, Boost(vec3(task.value("boost", json::array({0.5})))));
    r["before"] = {ir.before.real(), ir.before.imag()};
    r["after"] = {ir.after.real(), ir.after.imag()};
    r["rel_dev"] = ir.rel_dev;
    r["truncation"] = truncation_check(*field.amplitude);
  }
  w.result(std::move(r));
}

unsigned long long seed_of(const ScenarioConfig& cfg, const RunOptions& opt) {
  if (opt.seed) return *opt.seed;
  return cfg.doc.contains("seed") ? cfg.doc["seed"].get<unsigned long long>() : 1ull;
}

std::vector<double> sweep_values(const json& s) {
  if (s.contains("values")) return s["values"].get<std::vector<double>>();
  if (s.contains("ladder"))
    return LimitSweep::ladder(s["ladder"]["M0"].get<double>(), get_or(s["ladder"], "count", 6));
  const double a = s["range"]["from"], b = s["range"]["to"];
  const int n = s["range"]["count"];
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

} // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    validate(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return {doc, text, base_dir};
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), fs::path(path).parent_path().string().empty() ? "." : fs::path(path).parent_path().string());
}

RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt) {
  const unsigned long long seed = seed_of(cfg, opt);
  const Model model = read_model(cfg.doc);
  Writer w(cfg, opt, seed);
  const Field field = build_field(cfg.doc, model, seed, cfg.base_dir);
  if (cfg.doc.contains("tasks"))
    for (std::size_t i = 0; i < cfg.doc["tasks"].size(); ++i) run_task(cfg.doc["tasks"][i], i, field, model, w, seed + i);
  return w.finish();
}

RunResult run_sweep(const ScenarioConfig& cfg, const RunOptions& opt) {
  if (!cfg.doc.contains("sweep")) throw ConfigError("config: sweep block required");
  const json& s = cfg.doc["sweep"];
  const std::string axis = s["axis"], obs = s["observable"];
  const unsigned long long seed = seed_of(cfg, opt);
  const Model model = read_model(cfg.doc);
  Writer w(cfg, opt, seed);
  const Field base = build_field(cfg.doc, model, seed, cfg.base_dir);
  const std::vector<double> values = sweep_values(s);

  std::vector<std::string> cols{axis};
  if (obs == "total_probability" || obs == "inner_a") cols.insert(cols.end(), {obs, "split_formula"});
  else if (obs == "limit_deviation") cols.insert(cols.end(), {"rel_dev_rho", "rel_dev_j"});
  else if (obs == "gauge_norm") cols.insert(cols.end(), {"inner_a_re", "norm_rel_dev"});
  else cols.insert(cols.end(), {"before_re", "after_re", "rel_dev"});

  auto eval = [&](double v) -> std::vector<double> {
    if (obs == "total_probability" || obs == "inner_a") {
      const LatticeField& f0 = need_lattice_field(base, obs);
      ModelParams P = f0.params();
      LatticeField f = f0;
      if (axis == "a") {
        f = f0.with_params(P.with_a(v));
      } else {
        Model m2 = model;
        m2.params = P.with_mass(v);
        f = *build_field(cfg.doc, m2, seed, cfg.base_dir).lattice_field;
      }
      const double val = obs == "inner_a" ? inner_a(f, f, f.t0()).real() : total_probability(f, f.t0());
      return {v, val, inner_a_split(f, f, f.t0()).real()};
    }
    if (obs == "limit_deviation") {
      const LatticeField& f0 = need_lattice_field(base, obs);
      PacketSpec prof;
      if (cfg.doc["field"]["construction"] == "gaussian-packet") {
        prof.center = vec3(cfg.doc["field"].value("center", json()));
        prof.k0 = vec3(cfg.doc["field"].value("k0", json()));
        prof.sigma = get_or(cfg.doc["field"], "sigma", 1.0);
      }
      const LimitSweep sw{f0.lattice(), prof, {}};
      const std::string which = get_or<std::string>(s, "which", "Ja");
      const LimitRow row = limit_row(sw, v, which == "Ja" ? CurrentChoice::Ja : CurrentChoice::calJa, model.params.a());
      return {v, row.rel_dev_rho, row.rel_dev_j};
    }
    if (obs == "gauge_norm") {
      const LatticeField& f = need_lattice_field(base, obs);
      const cplx n0 = inner_a(f, f, f.t0());
      const LatticeField g = gauge_transform(f, v, f.params().a());
      const cplx n = inner_a(g, g, f.t0());
      return {v, n.real(), std::abs(n - n0) / std::abs(n0)};
    }
    if (!base.amplitude) throw PreconditionError("invariance_rel_dev needs a gaussian-amplitude field");
    const int order = static_cast<int>(std::lround(v));
    if (order < 2 || std::abs(order - v) > 1e-9) throw ConfigError("sweep: quadrature orders must be integers >= 2");
    const AmplitudeField f = base.amplitude->with_order(order);
    const InvarianceResult ir = invariance_check(f, f, Boost(vec3(s.value("boost", json::array({0.5})))));
    return {v, ir.before.real(), ir.after.real(), ir.rel_dev};
  };

  std::vector<std::vector<double>> rows(values.size());
  std::vector<std::string> errors(values.size());
  std::atomic<std::size_t> next{0};
  const int nw = std::max(1, std::min<int>(opt.workers, static_cast<int>(values.size())));
  std::vector<std::thread> pool;
  std::exception_ptr config_error;
  std::mutex err_mutex;
  for (int t = 0; t < nw; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < values.size();) {
        try {
          rows[i] = eval(values[i]);
        } catch (const ConfigError&) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!config_error) config_error = std::current_exception();
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (config_error) std::rethrow_exception(config_error);
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty()) throw PreconditionError("sweep point " + format_number(values[i]) + ": " + errors[i]);

  CsvTable t(cols);
  for (const auto& r : rows) t.add_row(r);
  ojson r{{"task", "sweep"}, {"axis", axis}, {"observable", obs}, {"points", values.size()}};
  if (axis == "M") {
    for (std::size_t c = 1; c < cols.size(); ++c) {
      std::vector<double> xs, ys;
      for (const auto& row : rows) xs.push_back(row[0]), ys.push_back(std::abs(row[c]));
      if (std::all_of(ys.begin(), ys.end(), [](double y) { return y > 0.0; }) && xs.size() >= 2) {
        const double sl = fit_loglog_slope(xs, ys);
        t.add_footer("slope " + cols[c] + " = " + format_number(sl));
        r["slope_" + cols[c]] = sl;
      }
    }
  }
  ojson table = ojson::array();
  for (const auto& row : rows) table.push_back(row);
  r["rows"] = table;
  w.table("sweep", t, r);
  w.result(r);
  return w.finish();
}

} // namespace kgfield
