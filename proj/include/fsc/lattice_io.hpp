#pragma once

#include <string>

#include "fsc/lattice.hpp"
#include "json.hpp"

namespace fsc {

// Stable JSON description of a lattice, schema "fsc.lattice/1":
//   spec        {a, b, level, L}
//   grid        {x: [lo, hi], y: [lo, hi], z: [lo, hi]}    inclusive box of the complex
//   holes       [{level, lo: [x, y, z], hi: [x, y, z]}]     open boxes in grid coordinates
//   vertices    [{g: [x, y, z], label, x_check}]
//   edges       [{g, label, qubit, vertices: [v...]}]       dangling edges list one vertex
//   faces       [{g, label, z_check, edges: [q...]}]
//   cubes       [{g, label, faces: [f...]}]
//   hole_shell  {cubes: [[x, y, z]...], faces: [[x, y, z]...]}
// Array positions equal the stated indices. Loading trusts the listed cells and
// incidence lists; validate() checks them.
nlohmann::json lattice_to_json(const Lattice& lattice);
Lattice lattice_from_json(const nlohmann::json& doc);

void save_lattice(const Lattice& lattice, const std::string& path);
Lattice load_lattice(const std::string& path);

}  // namespace fsc
