#include "wristctl/config.hpp"

#include "orthowrist/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

namespace wristctl {

using orthowrist::BodyKind;
using orthowrist::ErrorCategory;
using orthowrist::Vec3;
using orthowrist::WristError;

namespace {

enum class Range { any, positive, non_negative };

struct Field {
  std::size_t arity;  // 1, 3, or 3|6 for inertia (0 means "3 or 6")
  Range range;
  std::function<void(Config&, const std::vector<double>&)> set;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<double> parse_numbers(std::string_view text, const std::string& where) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    const std::string_view item =
        trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    double value = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw WristError(ErrorCategory::config_error,
                       where + ": '" + std::string(item) + "' is not a number");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

constexpr std::string_view kBodyKeys[] = {"proximal1", "proximal2", "terminal", "distal"};

std::map<std::string, Field, std::less<>> field_table() {
  std::map<std::string, Field, std::less<>> t;
  for (int i = 0; i < 5; ++i) {
    t["geometry.alpha" + std::to_string(i)] = {1, Range::any, [i](Config& c, const auto& v) {
                                                 c.model.geometry.alpha[i] = v[0];
                                               }};
  }
  for (int i = 0; i < 4; ++i) {
    t["geometry.home_theta" + std::to_string(i + 1)] = {
        1, Range::any, [i](Config& c, const auto& v) { c.model.geometry.home_thetas[i] = v[0]; }};
  }
  t["geometry.tool_length"] = {1, Range::positive,
                               [](Config& c, const auto& v) { c.model.geometry.tool_length = v[0]; }};
  t["geometry.mounting_azimuth"] = {
      1, Range::any, [](Config& c, const auto& v) { c.model.geometry.mounting_azimuth = v[0]; }};
  t["gravity"] = {3, Range::any,
                  [](Config& c, const auto& v) { c.model.gravity_work = Vec3(v[0], v[1], v[2]); }};
  t["defaults.sample_count"] = {1, Range::positive, [](Config& c, const auto& v) {
                                  c.sample_count = static_cast<std::size_t>(v[0]);
                                }};
  t["defaults.tool_speed"] = {1, Range::positive,
                              [](Config& c, const auto& v) { c.tool_speed = v[0]; }};

  for (std::size_t b = 0; b < 4; ++b) {
    const std::string prefix = "bodies." + std::string(kBodyKeys[b]) + ".";
    const auto kind = static_cast<BodyKind>(b);
    t[prefix + "mass"] = {1, Range::positive,
                          [kind](Config& c, const auto& v) { c.model.bodies[kind].mass = v[0]; }};
    t[prefix + "com"] = {3, Range::any, [kind](Config& c, const auto& v) {
                           c.model.bodies[kind].com_offset = Vec3(v[0], v[1], v[2]);
                         }};
    t[prefix + "inertia"] = {0, Range::any, [kind](Config& c, const auto& v) {
                               auto& m = c.model.bodies[kind].inertia;
                               m.setZero();
                               m.diagonal() << v[0], v[1], v[2];
                               if (v.size() == 6) {
                                 m(0, 1) = m(1, 0) = v[3];
                                 m(0, 2) = m(2, 0) = v[4];
                                 m(1, 2) = m(2, 1) = v[5];
                               }
                             }};
  }

  for (int m = 0; m < 2; ++m) {
    const std::string prefix = "motors." + std::to_string(m + 1) + ".";
    auto scalar = [&](const char* name, double orthowrist::MotorSpec::*member) {
      t[prefix + name] = {1, Range::positive, [m, member](Config& c, const auto& v) {
                            c.model.motors[m].*member = v[0];
                          }};
    };
    scalar("rotor_inertia", &orthowrist::MotorSpec::rotor_inertia);
    scalar("reduction_ratio", &orthowrist::MotorSpec::reduction_ratio);
    scalar("nominal_speed", &orthowrist::MotorSpec::nominal_speed);
    scalar("max_speed", &orthowrist::MotorSpec::max_speed);
    scalar("max_torque", &orthowrist::MotorSpec::max_torque);
    scalar("continuous_torque", &orthowrist::MotorSpec::continuous_torque);
    scalar("rated_power", &orthowrist::MotorSpec::rated_power);
  }
  return t;
}

// bodies.<body>.points.<name> accepts any point name.
bool assign_point(Config& c, std::string_view key, const std::vector<double>& v,
                  const std::string& where) {
  constexpr std::string_view head = "bodies.";
  if (key.substr(0, head.size()) != head) return false;
  for (std::size_t b = 0; b < 4; ++b) {
    const std::string prefix = std::string(head) + std::string(kBodyKeys[b]) + ".points.";
    if (key.size() > prefix.size() && key.substr(0, prefix.size()) == prefix) {
      if (v.size() != 3) {
        throw WristError(ErrorCategory::config_error, where + ": expected 3 values");
      }
      c.model.bodies[static_cast<BodyKind>(b)].force_points.insert_or_assign(
          std::string(key.substr(prefix.size())), Vec3(v[0], v[1], v[2]));
      return true;
    }
  }
  return false;
}

}  // namespace

Config default_config() { return Config{}; }

Config parse_config(std::istream& in, std::string_view source) {
  static const auto table = field_table();
  Config cfg;
  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const std::string at = std::string(source) + ":" + std::to_string(line_no);
    if (text.front() == '[') {
      if (text.back() != ']') {
        throw WristError(ErrorCategory::config_error, at + ": unterminated section header");
      }
      section = std::string(trim(text.substr(1, text.size() - 2)));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw WristError(ErrorCategory::config_error, at + ": expected 'key = value'");
    }
    std::string key(trim(text.substr(0, eq)));
    if (key.empty()) throw WristError(ErrorCategory::config_error, at + ": empty key");
    if (!section.empty()) key = section + "." + key;
    const std::string where = at + ": " + key;

    std::vector<double> values = parse_numbers(trim(text.substr(eq + 1)), where);
    std::string base = key;
    const bool degrees = key.ends_with("_deg");
    const bool rpm = key.ends_with("_rpm");
    if (degrees || rpm) base = key.substr(0, key.size() - 4);
    for (double& v : values) {
      if (!std::isfinite(v)) throw WristError(ErrorCategory::config_error, where + ": not finite");
      if (degrees) v *= std::numbers::pi / 180.0;
      if (rpm) v = orthowrist::rpm_to_rad_s(v);
    }

    if (assign_point(cfg, base, values, where)) continue;
    const auto it = table.find(base);
    if (it == table.end()) {
      throw WristError(ErrorCategory::config_error, where + ": unknown key");
    }
    const Field& f = it->second;
    const bool arity_ok = f.arity == 0 ? (values.size() == 3 || values.size() == 6)
                                       : values.size() == f.arity;
    if (!arity_ok) {
      throw WristError(ErrorCategory::config_error,
                       where + ": expected " + (f.arity == 0 ? std::string("3 or 6") : std::to_string(f.arity)) +
                           " value(s), got " + std::to_string(values.size()));
    }
    for (double v : values) {
      if (f.range == Range::positive && !(v > 0.0)) {
        throw WristError(ErrorCategory::config_error, where + " = " + std::to_string(v) + ": expected > 0");
      }
      if (f.range == Range::non_negative && !(v >= 0.0)) {
        throw WristError(ErrorCategory::config_error, where + " = " + std::to_string(v) + ": expected >= 0");
      }
    }
    if (base == "defaults.sample_count" && (values[0] < 3.0 || values[0] != std::floor(values[0]))) {
      throw WristError(ErrorCategory::config_error, where + ": expected an integer >= 3");
    }
    f.set(cfg, values);
  }

  // Cross-field invariants, reported against the block that holds them.
  auto check = [&](const std::string& block, auto&& fn) {
    try {
      fn();
    } catch (const WristError& e) {
      throw WristError(ErrorCategory::config_error,
                       std::string(source) + ": " + block + ": " + e.what());
    }
  };
  check("geometry", [&] { cfg.model.geometry.validate(); });
  for (std::size_t b = 0; b < 4; ++b) {
    check("bodies." + std::string(kBodyKeys[b]),
          [&] { cfg.model.bodies[static_cast<BodyKind>(b)].validate(); });
  }
  check("bodies", [&] { cfg.model.bodies.validate(cfg.model.geometry); });
  for (int m = 0; m < 2; ++m) {
    check("motors." + std::to_string(m + 1), [&] { cfg.model.motors[m].validate(); });
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw WristError(ErrorCategory::config_error, "cannot open config file '" + path + "'");
  return parse_config(in, path);
}

}  // namespace wristctl
