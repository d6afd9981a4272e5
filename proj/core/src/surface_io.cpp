#include <json.hpp>

#include "saddlekit/error.hpp"
#include "saddlekit/surface.hpp"

namespace saddlekit {

using nlohmann::json;

namespace {

Rational rational_field(const json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long>());
  throw Error(ErrorCode::kParse, "rational must be a string like \"3/7\"");
}

EdgeSlot slot_field(const json& value) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number_integer() ||
      !value[1].is_number_integer()) {
    throw Error(ErrorCode::kParse, "edge slot must be [triangle, edge]");
  }
  return {value[0].get<int>(), value[1].get<int>()};
}

}  // namespace

std::string surface_to_json(const TranslationSurface& s) {
  json triangles = json::array();
  for (const Triangle& tri : s.triangles()) {
    json edges = json::array();
    for (const ExactVector& e : tri.edges) {
      edges.push_back({format_rational(e.x), format_rational(e.y)});
    }
    triangles.push_back({{"edges", edges}});
  }
  json gluings = json::array();
  const int n = static_cast<int>(s.triangle_count());
  for (int t = 0; t < n; ++t) {
    for (int i = 0; i < 3; ++i) {
      const EdgeSlot a{t, i};
      const EdgeSlot b = s.partner(a);
      if (a < b) gluings.push_back({{a.triangle, a.edge}, {b.triangle, b.edge}});
    }
  }
  json doc;
  doc["triangles"] = triangles;
  doc["gluings"] = gluings;
  return doc.dump();
}

TranslationSurface surface_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("triangles") || !doc.contains("gluings")) {
    throw Error(ErrorCode::kParse, "surface needs \"triangles\" and \"gluings\"");
  }
  std::vector<Triangle> triangles;
  for (const json& tri : doc["triangles"]) {
    if (!tri.contains("edges") || tri["edges"].size() != 3) {
      throw Error(ErrorCode::kParse, "each triangle needs exactly three edges");
    }
    Triangle out;
    for (std::size_t i = 0; i < 3; ++i) {
      const json& e = tri["edges"][i];
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::kParse, "edge must be [x, y]");
      out.edges[i] = {rational_field(e[0]), rational_field(e[1])};
    }
    triangles.push_back(std::move(out));
  }
  const int n = static_cast<int>(triangles.size());
  std::vector<std::array<EdgeSlot, 3>> gluing(
      triangles.size(), {EdgeSlot{-1, -1}, EdgeSlot{-1, -1}, EdgeSlot{-1, -1}});
  auto assign = [&](EdgeSlot from, EdgeSlot to) {
    if (from.triangle < 0 || from.triangle >= n || from.edge < 0 || from.edge > 2) {
      throw Error(ErrorCode::kMalformed, "gluing slot out of range");
    }
    EdgeSlot& cell = gluing[static_cast<std::size_t>(from.triangle)][static_cast<std::size_t>(from.edge)];
    if (cell.triangle >= 0) {
      throw Error(ErrorCode::kGluingNotInvolutive, "edge slot glued more than once");
    }
    cell = to;
  };
  for (const json& pair : doc["gluings"]) {
    if (!pair.is_array() || pair.size() != 2) throw Error(ErrorCode::kParse, "gluing must be a pair");
    const EdgeSlot a = slot_field(pair[0]);
    const EdgeSlot b = slot_field(pair[1]);
    assign(a, b);
    assign(b, a);
  }
  for (const auto& row : gluing) {
    for (const EdgeSlot& slot : row) {
      if (slot.triangle < 0) throw Error(ErrorCode::kGluingNotInvolutive, "edge slot left unglued");
    }
  }
  return TranslationSurface(std::move(triangles), std::move(gluing));
}

}  // namespace saddlekit
