#include "matmi/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include "matmi/error.hpp"

namespace matmi {

std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

std::string field_csv(const ScalarField& f)
{
    const Mesh& mesh = f.mesh();
    std::string out = "x,y,value\n";
    out.reserve(out.size() + f.size() * 72);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec2& p = mesh.node(i);
        out += format_real(p.x());
        out += ',';
        out += format_real(p.y());
        out += ',';
        out += format_real(f[i]);
        out += '\n';
    }
    return out;
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& f)
{
    write_file_atomic(path, field_csv(f));
}

std::string vector_csv(const VectorField& v)
{
    const Mesh& mesh = v.mesh();
    std::string out = "x,y,vx,vy\n";
    for (std::size_t e = 0; e < v.size(); ++e) {
        const Vec2 c = mesh.centroid(e);
        out += format_real(c.x()) + ',' + format_real(c.y()) + ',' + format_real(v[e].x()) + ','
            + format_real(v[e].y()) + '\n';
    }
    return out;
}

void write_vector_csv(const std::filesystem::path& path, const VectorField& v)
{
    write_file_atomic(path, vector_csv(v));
}

namespace {

double parse_cell(const std::string& s, const std::filesystem::path& path, int line)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

} // namespace

ScalarField read_field_csv(const std::filesystem::path& path, const MeshPtr& mesh)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(path.string() + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,y,value") {
        throw IoError(path.string() + ": expected header 'x,y,value'");
    }

    const Bounds& b = mesh->bounds();
    const double tol = 1e-9 * std::hypot(b.width(), b.height());
    ScalarField f(mesh);
    std::size_t row = 0;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 3) {
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 3 columns");
        }
        if (row >= f.size()) {
            throw IoError(path.string() + ": more rows than mesh nodes ("
                          + std::to_string(f.size()) + ")");
        }
        const double x = parse_cell(cells[0], path, lineno);
        const double y = parse_cell(cells[1], path, lineno);
        const Vec2& p = mesh->node(row);
        if (std::abs(x - p.x()) > tol || std::abs(y - p.y()) > tol) {
            throw IoError(path.string() + ":" + std::to_string(lineno)
                          + ": coordinates do not match mesh node " + std::to_string(row));
        }
        f[row] = parse_cell(cells[2], path, lineno);
        ++row;
    }
    if (row != f.size()) {
        throw IoError(path.string() + ": " + std::to_string(row) + " rows, mesh has "
                      + std::to_string(f.size()) + " nodes");
    }
    return f;
}

std::string vtk_document(const Mesh& mesh, const std::vector<NamedField>& fields)
{
    std::ostringstream out;
    out << "# vtk DataFile Version 3.0\n"
        << "matmi\n"
        << "ASCII\n"
        << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.num_nodes() << " double\n";
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
        const Vec2& p = mesh.node(i);
        out << format_real(p.x()) << ' ' << format_real(p.y()) << " 0\n";
    }
    const std::size_t ne = mesh.num_elements();
    out << "CELLS " << ne << ' ' << 4 * ne << '\n';
    for (std::size_t e = 0; e < ne; ++e) {
        const Triangle& t = mesh.element(e);
        out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
    out << "CELL_TYPES " << ne << '\n';
    for (std::size_t e = 0; e < ne; ++e) {
        out << "5\n";
    }
    if (!fields.empty()) {
        out << "POINT_DATA " << mesh.num_nodes() << '\n';
        for (const auto& [name, f] : fields) {
            if (f->size() != mesh.num_nodes()) {
                throw PreconditionError("field '" + name + "' does not match the mesh");
            }
            out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
            for (std::size_t i = 0; i < f->size(); ++i) {
                out << format_real((*f)[i]) << '\n';
            }
        }
    }
    return out.str();
}

void write_vtk(const std::filesystem::path& path, const Mesh& mesh,
               const std::vector<NamedField>& fields)
{
    write_file_atomic(path, vtk_document(mesh, fields));
}

} // namespace matmi
