#pragma once

#include "eife/analysis.hpp"
#include "eife/mesh.hpp"
#include "eife/problems.hpp"
#include "eife/tensor.hpp"

#include <string>
#include <vector>

namespace eife {

/// Six significant digits in decimal notation; scientific (%.5e) for 0 < |x| < 1e-3.
std::string format_number(double x);

/// Header `nt,resolution,err_l2,cr_l2,err_h1,cr_h1,sec_per_step,growth`, one line per rung.
std::string report_csv(const StudyReport& report);
void write_report_csv(const StudyReport& report, const std::string& path);

/// Header `step,t,sup_norm,energy,err_l2,err_h1`.
std::string series_csv(const std::vector<SeriesRow>& rows);
void write_series_csv(const std::vector<SeriesRow>& rows, const std::string& path);

/// Legacy VTK structured-points text. Dirichlet snapshots carry boundary nodes,
/// periodic ones repeat the first node on the upper face.
std::string snapshot_vtk(const TensorD& u_nodal, const TensorMesh& mesh, const Problem& problem, double t);
void write_snapshot(const TensorD& u_nodal, const TensorMesh& mesh, const Problem& problem, double t,
                    const std::string& path);

/// Writes `text` to `path` or throws IoError.
void write_text_file(const std::string& path, const std::string& text);

} // namespace eife
