#include "dkz/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dkz {

namespace {

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // Keep floats recognisable as such on the way back in.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void dump_rec(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string pad_close(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        dump_rec(it.value(), indent, depth + 1, out);
      }
      out += nl;
      out += pad_close;
      out += "}";
      return;
    }
    case Json::value_t::array: {
      // Short arrays of scalars stay on one line, e.g. [re, im].
      bool flat = j.size() <= 4;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      if (!flat) out += nl;
      bool first = true;
      for (const auto& e : j) {
        if (!first) {
          out += ",";
          if (flat) {
            if (indent > 0) out += " ";
          } else {
            out += nl;
          }
        }
        first = false;
        if (!flat) out += pad;
        dump_rec(e, indent, depth + 1, out);
      }
      if (!flat) {
        out += nl;
        out += pad_close;
      }
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

double number_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ValidationError(std::string("path JSON: missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ValidationError("expected a complex number as [re, im], got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const ComplexMatrix& a) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(complex_to_json(a(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("expected a matrix as a list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix a(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
      throw ValidationError("matrix rows must have equal length");
    for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = complex_from_json(j[r][c]);
  }
  return a;
}

Json path_to_json(const ComplexPath& path) {
  Json segs = Json::array();
  for (const auto& s : path.segments()) {
    if (const auto* l = std::get_if<LineSegment>(&s)) {
      segs.push_back({{"type", "line"}, {"from", complex_to_json(l->from)}, {"to", complex_to_json(l->to)}});
    } else {
      const auto& a = std::get<ArcSegment>(s);
      segs.push_back({{"type", "arc"},
                      {"center", complex_to_json(a.center)},
                      {"radius", a.radius},
                      {"arg_from", a.arg_from},
                      {"arg_to", a.arg_to}});
    }
  }
  return {{"segments", segs}};
}

ComplexPath path_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("segments") || !j.at("segments").is_array())
    throw ValidationError("path JSON: expected an object with a 'segments' list");
  ComplexPath path;
  for (const auto& s : j.at("segments")) {
    const std::string type = s.value("type", "");
    if (type == "line") {
      path.then(LineSegment{complex_from_json(s.at("from")), complex_from_json(s.at("to"))});
    } else if (type == "arc") {
      path.then(ArcSegment{complex_from_json(s.at("center")), number_field(s, "radius"), number_field(s, "arg_from"),
                           number_field(s, "arg_to")});
    } else {
      throw ValidationError("path JSON: unknown segment type '" + type + "'");
    }
  }
  return path;
}

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  return out;
}

void write_json_atomic(const std::filesystem::path& path, const Json& j) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << dump_json(j) << '\n';
    if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open " + path.string());
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace dkz
