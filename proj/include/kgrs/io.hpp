#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kgrs/contact.hpp"
#include "kgrs/curvature.hpp"
#include "kgrs/profiles.hpp"
#include "kgrs/soliton.hpp"

namespace kgrs::io {

// Shortest decimal form that round-trips an IEEE double (17 significant
// digits); used everywhere so identical runs emit identical bytes.
std::string format_double(double v);

// Profile table, header "t,H,F,f".
void write_profile_csv(const std::filesystem::path& path, const ProfileGrid& grid);
ProfileGrid read_profile_csv(const std::filesystem::path& path);

// s-coordinate table, header "s,alpha,beta,phi"; the affine constants of the
// run are a JSON sidecar {A, B, C}.
void write_sprofile_csv(const std::filesystem::path& path, const SProfile& sp);
void write_sprofile_constants(const std::filesystem::path& path, const SProfile& sp);

void write_residual_csv(const std::filesystem::path& path, const std::vector<ResidualRow>& rows);

struct CurvatureRow {
  double t = 0.0;
  RicciDiag rc;
  double kahler_residual = 0.0;
};
void write_curvature_csv(const std::filesystem::path& path, const std::vector<CurvatureRow>& rows);

void write_closure_json(const std::filesystem::path& path, const ClosureReport& report);

struct PlotSeries {
  std::string label;
  std::vector<double> y;
};
void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::vector<double>& x, const std::vector<PlotSeries>& series);

}  // namespace kgrs::io
