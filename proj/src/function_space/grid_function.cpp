#include "isoresolve/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "isoresolve/error.hpp"

namespace isoresolve {

GridFunction::GridFunction(std::shared_ptr<const GradedMesh> mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (!mesh_) fail(ErrorKind::InvalidArgument, "grid function needs a mesh");
    if (values_.size() != mesh_->size()) {
        fail(ErrorKind::InvalidArgument, "grid function size does not match the mesh");
    }
}

GridFunction GridFunction::zeros(std::shared_ptr<const GradedMesh> mesh) {
    const std::size_t n = mesh->size();
    return GridFunction(std::move(mesh), std::vector<double>(n, 0.0));
}

GridFunction GridFunction::sample(std::shared_ptr<const GradedMesh> mesh,
                                  const std::function<double(double)>& phi) {
    std::vector<double> values(mesh->size());
    for (std::size_t j = 0; j < values.size(); ++j) values[j] = phi(mesh->node(j));
    return GridFunction(std::move(mesh), std::move(values));
}

GridFunction GridFunction::scaled(double factor) const {
    GridFunction out = *this;
    for (double& v : out.values_) v *= factor;
    return out;
}

GridFunction GridFunction::abs() const {
    GridFunction out = *this;
    for (double& v : out.values_) v = std::abs(v);
    return out;
}

GridFunction GridFunction::reflected() const {
    GridFunction out = *this;
    std::reverse(out.values_.begin(), out.values_.end());
    return out;
}

double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }
double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    if (other.mesh_ != mesh_) fail(ErrorKind::InvalidArgument, "grid functions on different meshes");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    if (other.mesh_ != mesh_) fail(ErrorKind::InvalidArgument, "grid functions on different meshes");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
    return *this;
}

int nodal_count(const GridFunction& u) {
    int changes = 0;
    int last_sign = 0;
    for (double v : u.values()) {
        const int sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        if (sign == 0) continue;
        if (last_sign != 0 && sign != last_sign) ++changes;
        last_sign = sign;
    }
    return changes;
}

std::string to_csv(const GridFunction& u) {
    const GradedMesh& mesh = u.mesh();
    const double D = mesh.profile().focal_distance();
    std::string out = "t,phi,V,d\n";
    char line[160];
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double t = mesh.node(j);
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", t, u[j],
                      mesh.profile().weight(t), singular_distance(t, D));
        out += line;
    }
    return out;
}

void write_csv(const GridFunction& u, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + path);
    out << to_csv(u);
    if (!out) fail(ErrorKind::Io, "write failed: " + path);
}

std::vector<GridFunctionRow> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "t,phi,V,d") {
        fail(ErrorKind::Parse, path + ": expected header t,phi,V,d");
    }
    std::vector<GridFunctionRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        GridFunctionRow row{};
        char* end = nullptr;
        const char* p = line.c_str();
        double* fields[] = {&row.t, &row.phi, &row.V, &row.d};
        for (int f = 0; f < 4; ++f) {
            *fields[f] = std::strtod(p, &end);
            if (end == p || !std::isfinite(*fields[f])) {
                fail(ErrorKind::Parse, path + ":" + std::to_string(line_no) + ": bad number");
            }
            p = end;
            if (f < 3) {
                if (*p != ',') {
                    fail(ErrorKind::Parse, path + ":" + std::to_string(line_no) + ": expected ','");
                }
                ++p;
            }
        }
        if (*p != '\0' && *p != '\r') {
            fail(ErrorKind::Parse, path + ":" + std::to_string(line_no) + ": trailing data");
        }
        rows.push_back(row);
    }
    if (rows.empty()) fail(ErrorKind::Parse, path + ": no rows");
    return rows;
}

}  // namespace isoresolve
