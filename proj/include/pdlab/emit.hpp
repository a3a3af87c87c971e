#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace pdlab {

// Doubles always printed with 17 significant digits.
std::string fmt17(double v);
std::string dump_json(const nlohmann::json& j, int indent = 2);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  std::string csv() const;
  nlohmann::json json() const;  // array of objects, numbers parsed back where possible
};

void write_text(const std::string& path, const std::string& text);

}  // namespace pdlab
