#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "matmi/fem.hpp"

namespace matmi {

/// "%.17g": enough digits to round-trip any double.
std::string format_real(double v);

/// Writes to a sibling temp file and renames it into place, so a failed
/// write never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Node-ordered CSV with header `x,y,value`.
std::string field_csv(const ScalarField& f);
void write_field_csv(const std::filesystem::path& path, const ScalarField& f);

/// Element-ordered CSV of an elementwise-constant field at the centroids,
/// header `x,y,vx,vy`.
std::string vector_csv(const VectorField& v);
void write_vector_csv(const std::filesystem::path& path, const VectorField& v);

/// Reads a node-ordered `x,y,value` file and checks each coordinate against
/// the mesh node (absolute tolerance 1e-9 times the domain diameter).
ScalarField read_field_csv(const std::filesystem::path& path, const MeshPtr& mesh);

using NamedField = std::pair<std::string, const ScalarField*>;

/// Legacy-VTK ASCII unstructured grid with one POINT_DATA scalar per field.
std::string vtk_document(const Mesh& mesh, const std::vector<NamedField>& fields);
void write_vtk(const std::filesystem::path& path, const Mesh& mesh,
               const std::vector<NamedField>& fields);

} // namespace matmi
