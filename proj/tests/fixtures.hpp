#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fixtures {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(MINDEVO_TEST_DATA) / name;
}

inline std::string read_text(const std::string& name) {
  std::ifstream in(data_path(name));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline nlohmann::json read_json(const std::string& name) { return nlohmann::json::parse(read_text(name)); }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mindevo-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
