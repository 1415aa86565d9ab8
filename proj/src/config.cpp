#include "richards4/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace richards4 {

namespace {

using nlohmann::json;

std::string show(const json& v) { return v.dump(); }

class Section {
 public:
  Section(const json& root, const std::string& name, std::set<std::string> allowed)
      : path_(name) {
    if (!root.contains(name)) return;
    node_ = &root.at(name);
    if (!node_->is_object()) throw ConfigError(name, "must be an object");
    for (const auto& [key, value] : node_->items()) {
      if (!allowed.count(key)) throw ConfigError(key_path(key), "unknown key");
    }
  }

  std::string key_path(const std::string& key) const { return path_ + "." + key; }

  const json* find(const std::string& key) const {
    if (!node_ || !node_->contains(key)) return nullptr;
    return &node_->at(key);
  }

  void number(const std::string& key, double& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(key_path(key), "expected a number, got " + show(*v));
      out = v->get<double>();
      if (!std::isfinite(out)) throw ConfigError(key_path(key), "must be finite");
    }
  }

  void integer(const std::string& key, int& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number_integer())
        throw ConfigError(key_path(key), "expected an integer, got " + show(*v));
      out = v->get<int>();
    }
  }

  void boolean(const std::string& key, bool& out) const {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(key_path(key), "expected true/false, got " + show(*v));
      out = v->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out) const {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(key_path(key), "expected a string, got " + show(*v));
      out = v->get<std::string>();
    }
  }

  template <typename T>
  void require(bool ok, const std::string& key, const std::string& constraint, T value) const {
    if (ok) return;
    std::ostringstream os;
    os.precision(17);
    os << "must satisfy " << constraint << "; got " << value;
    throw ConfigError(key_path(key), os.str());
  }

 private:
  std::string path_;
  const json* node_ = nullptr;
};

InitialCondition::Kind parse_profile(const std::string& name) {
  using Kind = InitialCondition::Kind;
  for (Kind k : {Kind::Zero, Kind::GaussianLens, Kind::Infiltration, Kind::RandomSmooth,
                 Kind::Custom})
    if (to_string(k) == name) return k;
  throw ConfigError("ic.profile",
                    "unknown profile '" + name +
                        "' (expected zero, gaussian_lens, infiltration, random_smooth or custom)");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("", "top level must be an object");
  const std::set<std::string> sections{"constitutive", "grid", "stepping", "ic", "output", "seed"};
  for (const auto& [key, value] : root.items())
    if (!sections.count(key)) throw ConfigError(key, "unknown key");

  RunConfig cfg;

  const Section con(root, "constitutive", {"alpha_vg", "n_vg", "s_res", "p_reg", "a_min", "k_floor"});
  auto& vg = cfg.constitutive;
  con.number("alpha_vg", vg.alpha_vg);
  con.number("n_vg", vg.n_vg);
  con.number("s_res", vg.s_res);
  con.number("p_reg", vg.p_reg);
  con.number("a_min", vg.a_min);
  con.number("k_floor", vg.k_floor);
  con.require(vg.alpha_vg > 0.0, "alpha_vg", "alpha_vg > 0", vg.alpha_vg);
  con.require(vg.n_vg > 1.0, "n_vg", "n_vg > 1 (van Genuchten exponent)", vg.n_vg);
  con.require(vg.s_res > 0.0 && vg.s_res < 1.0, "s_res", "0 < s_res < 1", vg.s_res);
  con.require(vg.p_reg < 0.0, "p_reg", "p_reg < 0", vg.p_reg);
  con.require(vg.a_min > 0.0, "a_min", "a_min > 0", vg.a_min);
  con.require(vg.k_floor > 0.0 && vg.k_floor < 1.0, "k_floor", "0 < k_floor < 1", vg.k_floor);
  try {
    ConstitutiveModel check(vg);
  } catch (const InvalidParameter& e) {
    throw ConfigError("constitutive", e.what());
  }

  const Section grid(root, "grid", {"length", "n_cells", "gravity_sign"});
  grid.number("length", cfg.grid.length);
  grid.integer("n_cells", cfg.grid.n_cells);
  grid.integer("gravity_sign", cfg.grid.gravity_sign);
  grid.require(cfg.grid.length > 0.0, "length", "length > 0", cfg.grid.length);
  grid.require(cfg.grid.n_cells >= 5, "n_cells", "n_cells >= 5", cfg.grid.n_cells);
  grid.require(cfg.grid.gravity_sign == 1 || cfg.grid.gravity_sign == -1, "gravity_sign",
               "gravity_sign in {+1, -1}", cfg.grid.gravity_sign);

  const Section st(root, "stepping",
                   {"h", "gamma", "t_end", "newton_tol", "newton_max_iter", "damping", "lag_gravity"});
  auto& sc = cfg.stepping;
  st.number("h", sc.h);
  st.number("gamma", sc.gamma);
  st.number("t_end", sc.t_end);
  st.number("newton_tol", sc.newton_tol);
  st.integer("newton_max_iter", sc.newton_max_iter);
  st.number("damping", sc.damping);
  st.boolean("lag_gravity", sc.lag_gravity);
  st.require(sc.h > 0.0, "h", "h > 0", sc.h);
  const double beta = 1.0;  // K_f <= 1 certifies the growth condition with beta = 1
  st.require(check_timestep(sc.h, beta), "h", "h <= 1/beta with beta = 1", sc.h);
  st.require(sc.gamma >= 0.0, "gamma", "gamma >= 0", sc.gamma);
  st.require(sc.t_end > 0.0, "t_end", "t_end > 0", sc.t_end);
  st.require(sc.newton_tol > 0.0, "newton_tol", "newton_tol > 0", sc.newton_tol);
  st.require(sc.newton_max_iter >= 1, "newton_max_iter", "newton_max_iter >= 1", sc.newton_max_iter);
  st.require(sc.damping > 0.0 && sc.damping < 1.0, "damping", "0 < damping < 1", sc.damping);

  const Section ic(root, "ic", {"profile", "center", "width", "depth", "table"});
  std::string profile = to_string(cfg.ic.kind);
  ic.string("profile", profile);
  cfg.ic.kind = parse_profile(profile);
  ic.number("center", cfg.ic.center);
  ic.number("width", cfg.ic.width);
  ic.number("depth", cfg.ic.depth);
  ic.require(cfg.ic.center > 0.0 && cfg.ic.center < 1.0, "center", "0 < center < 1", cfg.ic.center);
  ic.require(cfg.ic.width > 0.0, "width", "width > 0", cfg.ic.width);
  ic.require(cfg.ic.depth >= 0.0, "depth", "depth >= 0", cfg.ic.depth);
  if (const json* t = ic.find("table")) {
    if (!t->is_array()) throw ConfigError("ic.table", "expected an array of [z, u] pairs");
    for (std::size_t i = 0; i < t->size(); ++i) {
      const json& row = (*t)[i];
      const std::string key = "ic.table[" + std::to_string(i) + "]";
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
        throw ConfigError(key, "expected [z, u], got " + show(row));
      const double z = row[0].get<double>();
      if (z < 0.0 || z > cfg.grid.length)
        throw ConfigError(key, "z must lie in [0, grid.length]; got " + show(row[0]));
      cfg.ic.table.emplace_back(z, row[1].get<double>());
    }
  }
  if (cfg.ic.kind == InitialCondition::Kind::Custom && cfg.ic.table.size() < 2)
    throw ConfigError("ic.table", "custom profile needs at least two [z, u] rows");

  const Section out(root, "output", {"directory", "stride"});
  out.string("directory", cfg.output.directory);
  out.integer("stride", cfg.output.stride);
  out.require(cfg.output.stride >= 1, "stride", "stride >= 1", cfg.output.stride);

  if (root.contains("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      throw ConfigError("seed", "expected a non-negative integer, got " + show(s));
    cfg.seed = s.get<std::uint64_t>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_json(const RunConfig& cfg) {
  const auto& vg = cfg.constitutive;
  const auto& sc = cfg.stepping;
  json table = json::array();
  for (const auto& [z, u] : cfg.ic.table) table.push_back({z, u});
  const json j = {
      {"constitutive",
       {{"alpha_vg", vg.alpha_vg}, {"n_vg", vg.n_vg}, {"s_res", vg.s_res}, {"p_reg", vg.p_reg},
        {"a_min", vg.a_min}, {"k_floor", vg.k_floor}}},
      {"grid",
       {{"length", cfg.grid.length}, {"n_cells", cfg.grid.n_cells},
        {"gravity_sign", cfg.grid.gravity_sign}}},
      {"stepping",
       {{"h", sc.h}, {"gamma", sc.gamma}, {"t_end", sc.t_end}, {"newton_tol", sc.newton_tol},
        {"newton_max_iter", sc.newton_max_iter}, {"damping", sc.damping},
        {"lag_gravity", sc.lag_gravity}}},
      {"ic",
       {{"profile", to_string(cfg.ic.kind)}, {"center", cfg.ic.center}, {"width", cfg.ic.width},
        {"depth", cfg.ic.depth}, {"table", table}}},
      {"output", {{"directory", cfg.output.directory}, {"stride", cfg.output.stride}}},
      {"seed", cfg.seed},
  };
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  // The output directory does not influence results, so it is left out.
  RunConfig hashed = cfg;
  hashed.output.directory.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(hashed)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace richards4
