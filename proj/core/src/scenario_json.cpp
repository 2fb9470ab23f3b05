#include "homegrid/scenario_json.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace homegrid {

namespace {

using nlohmann::ordered_json;

double quantized(double v) { return std::round(v * 1e6) / 1e6; }

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument(path.empty() ? what : path + ": " + what);
}

void reject_unknown_keys(const ordered_json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known) fail(path, "unknown key '" + key + "'");
  }
}

double get_number(const ordered_json& obj, const std::string& path, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
  return obj[key].get<double>();
}

int get_int(const ordered_json& obj, const std::string& path, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) fail(path + "." + key, "expected an integer");
  return obj[key].get<int>();
}

std::vector<double> get_number_list(const ordered_json& obj, const std::string& path,
                                    const char* key) {
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  if (!obj[key].is_array()) fail(path + "." + key, "expected an array");
  for (const auto& v : obj[key]) {
    if (!v.is_number()) fail(path + "." + key, "expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Appliance parse_appliance(const ordered_json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  reject_unknown_keys(j, path,
                      {"duration", "power", "disutility_factor", "reservation_slot", "max_end",
                       "interruptible", "requests"});
  Appliance a;
  a.duration = get_int(j, path, "duration", a.duration);
  a.power = get_number(j, path, "power", a.power);
  a.disutility_factor = get_number(j, path, "disutility_factor", a.disutility_factor);
  a.reservation_slot = get_int(j, path, "reservation_slot", a.reservation_slot);
  a.max_end = get_int(j, path, "max_end", a.max_end);
  if (j.contains("interruptible")) {
    if (!j["interruptible"].is_boolean()) fail(path + ".interruptible", "expected a boolean");
    a.interruptible = j["interruptible"].get<bool>();
  }
  if (j.contains("requests")) {
    if (!j["requests"].is_array()) fail(path + ".requests", "expected an array");
    for (const auto& v : j["requests"]) {
      if (!v.is_number_integer()) fail(path + ".requests", "expected integers");
      a.requests.push_back(v.get<int>());
    }
  }
  return a;
}

StorageSpec parse_storage(const ordered_json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  reject_unknown_keys(
      j, path,
      {"initial", "charge_power", "efficiency", "retention", "max_capacity", "min_capacity"});
  StorageSpec st;
  st.initial_energy = get_number(j, path, "initial", st.initial_energy);
  st.charge_power = get_number(j, path, "charge_power", st.charge_power);
  st.efficiency = get_number(j, path, "efficiency", st.efficiency);
  st.retention = get_number(j, path, "retention", st.retention);
  st.max_capacity = get_number(j, path, "max_capacity", st.max_capacity);
  st.min_capacity = get_number(j, path, "min_capacity", st.min_capacity);
  return st;
}

Household parse_household(const ordered_json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  reject_unknown_keys(j, path, {"appliances", "storage", "renewable", "grid_limit"});
  Household hh;
  if (j.contains("appliances")) {
    if (!j["appliances"].is_array()) fail(path + ".appliances", "expected an array");
    int i = 0;
    for (const auto& a : j["appliances"])
      hh.appliances.push_back(
          parse_appliance(a, path + ".appliances[" + std::to_string(i++) + "]"));
  }
  if (j.contains("storage")) hh.storage = parse_storage(j["storage"], path + ".storage");
  hh.renewable = get_number_list(j, path, "renewable");
  hh.grid_limit = get_number(j, path, "grid_limit", hh.grid_limit);
  return hh;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    // Recover line/column from the byte offset for a readable message.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw std::invalid_argument("scenario JSON parse error at line " + std::to_string(line) +
                                ", column " + std::to_string(col) + ": " + e.what());
  }

  if (!j.is_object()) fail("", "scenario file must be a JSON object");
  reject_unknown_keys(j, "", {"horizon", "grid_price", "households"});
  Scenario s;
  s.horizon_slots = get_int(j, "", "horizon", 0);
  s.grid_price = get_number_list(j, "", "grid_price");
  if (j.contains("households")) {
    if (!j["households"].is_array()) fail("households", "expected an array");
    int k = 0;
    for (const auto& hh : j["households"])
      s.households.push_back(parse_household(hh, "households[" + std::to_string(k++) + "]"));
  }

  const auto problems = validate_scenario(s);
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "scenario validation failed:";
    for (const Violation& v : problems) msg << "\n  " << to_string(v);
    throw std::invalid_argument(msg.str());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
  ordered_json j;
  j["horizon"] = s.horizon_slots;
  j["grid_price"] = ordered_json::array();
  for (double p : s.grid_price) j["grid_price"].push_back(quantized(p));
  j["households"] = ordered_json::array();
  for (const Household& hh : s.households) {
    ordered_json jh;
    jh["appliances"] = ordered_json::array();
    for (const Appliance& a : hh.appliances) {
      if (a.predecessor != -1)
        throw std::invalid_argument(
            "expanded scenarios (predecessor links) have no file representation");
      ordered_json ja;
      ja["duration"] = a.duration;
      ja["power"] = quantized(a.power);
      ja["disutility_factor"] = quantized(a.disutility_factor);
      ja["reservation_slot"] = a.reservation_slot;
      ja["max_end"] = a.max_end;
      ja["interruptible"] = a.interruptible;
      ja["requests"] = a.requests;
      jh["appliances"].push_back(std::move(ja));
    }
    ordered_json js;
    js["initial"] = quantized(hh.storage.initial_energy);
    js["charge_power"] = quantized(hh.storage.charge_power);
    js["efficiency"] = quantized(hh.storage.efficiency);
    js["retention"] = quantized(hh.storage.retention);
    js["max_capacity"] = quantized(hh.storage.max_capacity);
    js["min_capacity"] = quantized(hh.storage.min_capacity);
    jh["storage"] = std::move(js);
    jh["renewable"] = ordered_json::array();
    for (double r : hh.renewable) jh["renewable"].push_back(quantized(r));
    jh["grid_limit"] = quantized(hh.grid_limit);
    j["households"].push_back(std::move(jh));
  }
  return j.dump(2) + "\n";
}

void save_scenario(const Scenario& s, const std::string& path) {
  const std::string text = scenario_to_json(s);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing scenario file: " + path);
}

bool structurally_equal(const Scenario& a, const Scenario& b) {
  if (a.horizon_slots != b.horizon_slots || a.grid_price != b.grid_price ||
      a.households.size() != b.households.size())
    return false;
  for (std::size_t k = 0; k < a.households.size(); ++k) {
    const Household& x = a.households[k];
    const Household& y = b.households[k];
    if (x.renewable != y.renewable || x.grid_limit != y.grid_limit ||
        x.appliances.size() != y.appliances.size())
      return false;
    const StorageSpec& sx = x.storage;
    const StorageSpec& sy = y.storage;
    if (sx.initial_energy != sy.initial_energy || sx.charge_power != sy.charge_power ||
        sx.efficiency != sy.efficiency || sx.retention != sy.retention ||
        sx.max_capacity != sy.max_capacity || sx.min_capacity != sy.min_capacity)
      return false;
    for (std::size_t i = 0; i < x.appliances.size(); ++i) {
      const Appliance& p = x.appliances[i];
      const Appliance& q = y.appliances[i];
      if (p.duration != q.duration || p.power != q.power ||
          p.disutility_factor != q.disutility_factor ||
          p.reservation_slot != q.reservation_slot || p.max_end != q.max_end ||
          p.interruptible != q.interruptible || p.requests != q.requests ||
          p.predecessor != q.predecessor)
        return false;
    }
  }
  return true;
}

}  // namespace homegrid
