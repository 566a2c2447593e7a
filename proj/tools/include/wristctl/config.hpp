#pragma once

// Flat key = value configuration for wristctl.
//
//   # comment
//   [bodies.terminal]          optional section prefix for the keys below
//   mass = 0.6
//   com = 0, 0.03, 0.05
//
// Keys ending in _deg or _rpm are converted to radians or rad/s. Every key is
// optional; omitted keys keep the built-in default. Errors name the key.

#include "orthowrist/analysis.hpp"

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>

namespace wristctl {

struct Config {
  orthowrist::WristModel model;
  std::size_t sample_count = orthowrist::TrajectorySpec::kDefaultSampleCount;
  double tool_speed = 1.0;  // Vp, m/s
};

Config default_config();

/// `source` names the input in error messages.
Config parse_config(std::istream& in, std::string_view source = "<config>");
Config load_config(const std::string& path);

}  // namespace wristctl
