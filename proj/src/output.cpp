#include "eife/output.hpp"

#include "eife/errors.hpp"
#include "eife/fem_assembly.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace eife {

std::string format_number(double x) {
    if (x == 0.0) return "0";
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[64];
    const double ax = std::abs(x);
    if (ax < 1e-3) {
        std::snprintf(buf, sizeof buf, "%.5e", x);
        return buf;
    }
    const int magnitude = static_cast<int>(std::floor(std::log10(ax)));
    const int decimals = std::max(0, 5 - magnitude);
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

} // namespace

std::string report_csv(const StudyReport& report) {
    std::ostringstream out;
    out << "nt,resolution,err_l2,cr_l2,err_h1,cr_h1,sec_per_step,growth\n";
    for (const auto& r : report.rows) {
        out << r.nt << ',' << r.resolution << ',' << cell(r.err_l2) << ',' << cell(r.rate_l2) << ','
            << cell(r.err_h1) << ',' << cell(r.rate_h1) << ',' << format_number(r.seconds_per_step) << ','
            << cell(r.growth) << '\n';
    }
    return out.str();
}

void write_report_csv(const StudyReport& report, const std::string& path) { write_text_file(path, report_csv(report)); }

std::string series_csv(const std::vector<SeriesRow>& rows) {
    std::ostringstream out;
    out << "step,t,sup_norm,energy,err_l2,err_h1\n";
    for (const auto& r : rows) {
        out << r.step << ',' << format_number(r.t) << ',' << format_number(r.sup_norm) << ',' << cell(r.energy) << ','
            << cell(r.err_l2) << ',' << cell(r.err_h1) << '\n';
    }
    return out.str();
}

void write_series_csv(const std::vector<SeriesRow>& rows, const std::string& path) {
    write_text_file(path, series_csv(rows));
}

std::string snapshot_vtk(const TensorD& u_nodal, const TensorMesh& mesh, const Problem& problem, double t) {
    const TensorD full = full_nodal_field(u_nodal, mesh, problem, t);
    const std::size_t d = mesh.dim();
    std::size_t dims[3] = {1, 1, 1};
    double origin[3] = {0.0, 0.0, 0.0};
    double spacing[3] = {1.0, 1.0, 1.0};
    for (std::size_t a = 0; a < d; ++a) {
        dims[a] = full.shape()[a];
        origin[a] = mesh.axis(a).a;
        spacing[a] = mesh.axis(a).h;
    }
    std::ostringstream out;
    out.precision(17);
    out << "# vtk DataFile Version 3.0\n"
        << "u at t = " << t << '\n'
        << "ASCII\n"
        << "DATASET STRUCTURED_POINTS\n"
        << "DIMENSIONS " << dims[0] << ' ' << dims[1] << ' ' << dims[2] << '\n'
        << "ORIGIN " << origin[0] << ' ' << origin[1] << ' ' << origin[2] << '\n'
        << "SPACING " << spacing[0] << ' ' << spacing[1] << ' ' << spacing[2] << '\n'
        << "POINT_DATA " << full.size() << '\n'
        << "SCALARS u double 1\n"
        << "LOOKUP_TABLE default\n";
    // The tensor is stored last-axis fastest; VTK wants x fastest.
    MultiIndex idx(d, 0);
    for (std::size_t k = 0; k < dims[2]; ++k) {
        for (std::size_t j = 0; j < dims[1]; ++j) {
            for (std::size_t i = 0; i < dims[0]; ++i) {
                const std::size_t ijk[3] = {i, j, k};
                for (std::size_t a = 0; a < d; ++a) idx[a] = ijk[a];
                out << full.at(idx) << '\n';
            }
        }
    }
    return out.str();
}

void write_snapshot(const TensorD& u_nodal, const TensorMesh& mesh, const Problem& problem, double t,
                    const std::string& path) {
    write_text_file(path, snapshot_vtk(u_nodal, mesh, problem, t));
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

} // namespace eife
