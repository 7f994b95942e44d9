#include "fsc/lattice_io.hpp"

#include <fstream>

namespace fsc {

namespace {

using nlohmann::json;

json point_json(const GridPoint& p) { return json::array({p.x, p.y, p.z}); }

GridPoint point_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw SpecError("grid point must be an array of 3 integers");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

template <std::size_t N>
json refs(const std::array<int, N>& row) {
  json out = json::array();
  for (int v : row) {
    if (v != Lattice::kNone) out.push_back(v);
  }
  return out;
}

template <std::size_t N>
std::array<int, N> refs_from(const json& j, const char* what) {
  std::array<int, N> row;
  row.fill(Lattice::kNone);
  if (!j.is_array() || j.size() > N) throw SpecError(std::string("malformed ") + what + " list");
  for (std::size_t i = 0; i < j.size(); ++i) row[i] = j[i].get<int>();
  return row;
}

}  // namespace

json lattice_to_json(const Lattice& lattice) {
  const FractalSpec& s = lattice.spec();
  json doc;
  doc["schema"] = "fsc.lattice/1";
  doc["spec"] = {{"a", s.a}, {"b", s.b}, {"level", s.level}, {"L", s.size}};
  int hi = 2 * s.size - 2;
  doc["grid"] = {{"x", {0, hi}}, {"y", {0, hi}}, {"z", {1, hi + 1}}};
  json holes = json::array();
  for (const HoleBox& box : lattice.holes()) {
    holes.push_back({{"level", box.level}, {"lo", box.lo}, {"hi", box.hi}});
  }
  doc["holes"] = holes;

  json vertices = json::array();
  for (std::size_t v = 0; v < lattice.cells(0).size(); ++v) {
    int id = lattice.cells(0)[v];
    vertices.push_back({{"g", point_json(lattice.point(id))}, {"label", label_name(lattice.label(id))}, {"x_check", v}});
  }
  json edges = json::array();
  for (std::size_t e = 0; e < lattice.cells(1).size(); ++e) {
    int id = lattice.cells(1)[e];
    edges.push_back({{"g", point_json(lattice.point(id))},
                     {"label", label_name(lattice.label(id))},
                     {"qubit", e},
                     {"vertices", refs(lattice.edge_vertices()[e])}});
  }
  json faces = json::array();
  for (std::size_t f = 0; f < lattice.cells(2).size(); ++f) {
    int id = lattice.cells(2)[f];
    faces.push_back({{"g", point_json(lattice.point(id))},
                     {"label", label_name(lattice.label(id))},
                     {"z_check", f},
                     {"edges", refs(lattice.face_edges()[f])}});
  }
  json cubes = json::array();
  for (std::size_t c = 0; c < lattice.cells(3).size(); ++c) {
    int id = lattice.cells(3)[c];
    cubes.push_back({{"g", point_json(lattice.point(id))},
                     {"label", label_name(lattice.label(id))},
                     {"faces", refs(lattice.cube_faces()[c])}});
  }
  doc["vertices"] = vertices;
  doc["edges"] = edges;
  doc["faces"] = faces;
  doc["cubes"] = cubes;
  json shell_cubes = json::array();
  for (int id : lattice.shell_cubes()) shell_cubes.push_back(point_json(lattice.point(id)));
  json shell_faces = json::array();
  for (int id : lattice.shell_faces()) shell_faces.push_back(point_json(lattice.point(id)));
  doc["hole_shell"] = {{"cubes", shell_cubes}, {"faces", shell_faces}};
  return doc;
}

Lattice lattice_from_json(const json& doc) {
  try {
    if (doc.value("schema", "") != "fsc.lattice/1") throw SpecError("unsupported lattice schema");
    FractalSpec spec;
    const json& s = doc.at("spec");
    spec.a = s.at("a").get<int>();
    spec.b = s.at("b").get<int>();
    spec.level = s.at("level").get<int>();
    spec.size = s.at("L").get<int>();
    std::vector<HoleBox> holes;
    for (const json& h : doc.at("holes")) {
      HoleBox box;
      box.level = h.at("level").get<int>();
      box.lo = h.at("lo").get<std::array<int, 3>>();
      box.hi = h.at("hi").get<std::array<int, 3>>();
      holes.push_back(box);
    }
    Lattice::Tables tables;
    const char* keys[4] = {"vertices", "edges", "faces", "cubes"};
    for (int d = 0; d < 4; ++d) {
      for (const json& cell : doc.at(keys[d])) tables.cells[d].push_back(point_from(cell.at("g")));
    }
    for (const json& cell : doc.at("edges")) tables.edge_vertices.push_back(refs_from<2>(cell.at("vertices"), "vertex"));
    for (const json& cell : doc.at("faces")) tables.face_edges.push_back(refs_from<4>(cell.at("edges"), "edge"));
    for (const json& cell : doc.at("cubes")) tables.cube_faces.push_back(refs_from<6>(cell.at("faces"), "face"));
    return Lattice(spec, std::move(holes), std::move(tables));
  } catch (const json::exception& err) {
    throw SpecError(std::string("malformed lattice JSON: ") + err.what());
  }
}

void save_lattice(const Lattice& lattice, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << lattice_to_json(lattice).dump(1) << "\n";
}

Lattice load_lattice(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& err) {
    throw SpecError("malformed lattice JSON in " + path + ": " + err.what());
  }
  return lattice_from_json(doc);
}

}  // namespace fsc
