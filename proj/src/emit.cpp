#include "pdlab/emit.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pdlab/geometry.hpp"

namespace pdlab {

std::string fmt17(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write(const nlohmann::json& j, std::ostringstream& os, int indent, int level) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (level + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * level), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << pad << nlohmann::json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write(it.value(), os, indent, level + 1);
      }
      os << nl << close << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool flat = true;
      for (const auto& v : j)
        if (v.is_structured()) flat = false;
      os << "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ",";
        if (!flat) os << nl << pad;
        else if (!first) os << " ";
        first = false;
        write(v, os, indent, level + 1);
      }
      if (!flat) os << nl << close;
      os << "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) os << fmt17(v);
      else os << "null";
      return;
    }
    default: os << j.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& j, int indent) {
  std::ostringstream os;
  write(j, os, indent, 0);
  os << "\n";
  return os.str();
}

std::string Table::csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
  return os.str();
}

nlohmann::json Table::json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < header.size() && i < r.size(); ++i) {
      const std::string& s = r[i];
      char* end = nullptr;
      if (!s.empty() && s.find_first_of(".eEn") == std::string::npos) {
        const long long v = std::strtoll(s.c_str(), &end, 10);
        if (end && *end == '\0') {
          o[header[i]] = v;
          continue;
        }
      }
      const double v = std::strtod(s.c_str(), &end);
      if (!s.empty() && end && *end == '\0' && s != "nan" && s != "inf" && s != "-inf")
        o[header[i]] = v;
      else
        o[header[i]] = s;
    }
    arr.push_back(o);
  }
  return arr;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << text;
  if (!os) throw Error("write failed for " + path);
}

}  // namespace pdlab
