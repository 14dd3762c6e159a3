#pragma once

#include <fstream>
#include <sstream>
#include <string>

inline std::string data_path(const std::string& rel) { return std::string(DEVAUDIT_DATA_DIR) + "/" + rel; }

inline std::string read_data(const std::string& rel) {
  std::ifstream in(data_path(rel));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
