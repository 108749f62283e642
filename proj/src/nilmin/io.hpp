#ifndef NILMIN_IO_HPP
#define NILMIN_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "nilmin/mesh.hpp"
#include "nilmin/potentials.hpp"
#include "nilmin/spinors.hpp"

namespace nilmin {

using json = nlohmann::json;

json loop_to_json(const TwistedLoop& a);
TwistedLoop loop_from_json(const json& j);

json potential_to_json(const PotentialSpec& s);
PotentialSpec potential_from_json(const json& j);

// CSV carries the grid in a leading comment line, then one row per node in
// index order; doubles round-trip exactly. Mesh rows fix tau = 1/2 on read,
// the convention of every surface-level module.
struct SpinorInput {
  SpinorField field;
  std::vector<uint8_t> defined;
};

void write_spinor_csv(std::ostream& os, const SpinorField& sf,
                      const std::vector<uint8_t>& defined = {});
SpinorInput read_spinor_csv(std::istream& is);

void write_mesh_csv(std::ostream& os, const SurfaceMesh& mesh);
SurfaceMesh read_mesh_csv(std::istream& is);

// ASCII quads, vertices for defined nodes only, faces for cells whose four
// corners are defined, indices 1-based
void write_mesh_obj(std::ostream& os, const SurfaceMesh& mesh);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace nilmin

#endif
