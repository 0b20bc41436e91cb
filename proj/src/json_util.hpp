#pragma once

// Internal helpers shared by the structured-text readers and writers.

#include "egosum/geometry.hpp"
#include "egosum/histogram.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace egosum::detail {

using json = nlohmann::json;

/// Thrown by the accessors below; carries the dotted field path.
struct FieldError : std::runtime_error {
  std::string path;
  FieldError(const std::string& p, const std::string& msg)
      : std::runtime_error(p + ": " + msg), path(p) {}
};

inline const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw FieldError(path, "expected object");
  auto it = obj.find(key);
  if (it == obj.end()) throw FieldError(path + "." + key, "missing field");
  return *it;
}

inline double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw FieldError(path, "expected number");
  return v.get<double>();
}

inline int get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw FieldError(path, "expected integer");
  return v.get<int>();
}

inline std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw FieldError(path, "expected string");
  return v.get<std::string>();
}

inline const json& get_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw FieldError(path, "expected array");
  return v;
}

inline Point point_from_json(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw FieldError(path, "expected [x, y]");
  return {get_number(v[0], path + "[0]"), get_number(v[1], path + "[1]")};
}

inline json point_to_json(const Point& p) { return json::array({p.x(), p.y()}); }

inline Box box_from_json(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 4) throw FieldError(path, "expected [x, y, w, h]");
  return {get_number(v[0], path + "[0]"), get_number(v[1], path + "[1]"),
          get_number(v[2], path + "[2]"), get_number(v[3], path + "[3]")};
}

inline json box_to_json(const Box& b) { return json::array({b.x, b.y, b.w, b.h}); }

/// Sparse histogram as [[bin, count], ...] with strictly increasing bins.
/// Zero counts are dropped so that re-serialisation is canonical.
inline Histogram histogram_from_json(const json& v, int bins, const std::string& path) {
  get_array(v, path);
  Histogram h(bins);
  h.reserve(static_cast<Eigen::Index>(v.size()));
  int last = -1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const json& e = v[i];
    if (!e.is_array() || e.size() != 2) throw FieldError(p, "expected [bin, count]");
    const int bin = get_int(e[0], p + "[0]");
    const double count = get_number(e[1], p + "[1]");
    if (bin < 0 || bin >= bins) throw FieldError(p, "bin out of range");
    if (bin <= last) throw FieldError(p, "bins must be strictly increasing");
    last = bin;
    if (count != 0.0) h.insertBack(bin) = count;
  }
  return h;
}

inline json histogram_to_json(const Histogram& h) {
  json out = json::array();
  for (Histogram::InnerIterator it(h); it; ++it)
    out.push_back(json::array({static_cast<int>(it.index()), it.value()}));
  return out;
}

}  // namespace egosum::detail
