#include "kgrs/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kgrs/errors.hpp"

namespace kgrs::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path.string());
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, std::size_t line_no) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0'))
    throw ValidationError("malformed number '" + text + "' on line " + std::to_string(line_no));
  return v;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_profile_csv(const std::filesystem::path& path, const ProfileGrid& grid) {
  auto out = open_out(path);
  out << "t,H,F,f\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    out << format_double(grid.t[i]) << ',' << format_double(grid.H[i]) << ','
        << format_double(grid.F[i]) << ',' << format_double(grid.f[i]) << '\n';
}

ProfileGrid read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open profile CSV: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty profile CSV: " + path.string());
  if (strip_cr(line) != "t,H,F,f")
    throw ValidationError("profile CSV must start with the header 't,H,F,f'");
  std::vector<double> t, H, F, f;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4)
      throw ValidationError("expected 4 columns on line " + std::to_string(line_no));
    t.push_back(parse_double(fields[0], line_no));
    H.push_back(parse_double(fields[1], line_no));
    F.push_back(parse_double(fields[2], line_no));
    f.push_back(parse_double(fields[3], line_no));
  }
  return build_grid(std::move(t), std::move(H), std::move(F), std::move(f));
}

void write_sprofile_csv(const std::filesystem::path& path, const SProfile& sp) {
  auto out = open_out(path);
  out << "s,alpha,beta,phi\n";
  for (std::size_t i = 0; i < sp.size(); ++i)
    out << format_double(sp.s[i]) << ',' << format_double(sp.alpha[i]) << ','
        << format_double(sp.beta[i]) << ',' << format_double(sp.phi[i]) << '\n';
}

void write_sprofile_constants(const std::filesystem::path& path, const SProfile& sp) {
  nlohmann::ordered_json j;
  j["A"] = sp.constants.A;
  j["B"] = sp.constants.B;
  j["C"] = sp.constants.C;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_residual_csv(const std::filesystem::path& path, const std::vector<ResidualRow>& rows) {
  auto out = open_out(path);
  out << "t,r_normal,r_fiber,r_base,r_kahler,r_killing\n";
  for (const ResidualRow& row : rows)
    out << format_double(row.t) << ',' << format_double(row.r.r_normal) << ','
        << format_double(row.r.r_fiber) << ',' << format_double(row.r.r_base) << ','
        << format_double(row.r.r_kahler) << ',' << format_double(row.r.r_killing) << '\n';
}

void write_curvature_csv(const std::filesystem::path& path,
                         const std::vector<CurvatureRow>& rows) {
  auto out = open_out(path);
  out << "t,rc_normal,rc_fiber,rc_base,kahler_residual\n";
  for (const CurvatureRow& row : rows)
    out << format_double(row.t) << ',' << format_double(row.rc.rc_normal) << ','
        << format_double(row.rc.rc_fiber) << ',' << format_double(row.rc.rc_base) << ','
        << format_double(row.kahler_residual) << '\n';
}

void write_closure_json(const std::filesystem::path& path, const ClosureReport& report) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(report.mode);
  j["pass"] = report.pass;
  j["defects"] = nlohmann::ordered_json::array();
  for (const ClosureDefect& d : report.defects) {
    nlohmann::ordered_json e;
    e["condition"] = d.condition;
    e["measured"] = d.measured;
    e["required"] = d.required;
    e["tolerance"] = d.tolerance;
    e["ok"] = d.ok();
    j["defects"].push_back(e);
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginL = 64.0;
constexpr double kMarginR = 16.0;
constexpr double kMarginT = 40.0;
constexpr double kMarginB = 48.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string axis_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::vector<double>& x, const std::vector<PlotSeries>& series) {
  if (x.size() < 2) throw ValidationError("plot needs at least two samples");
  double ymin = 0.0, ymax = 0.0;
  bool first = true;
  for (const PlotSeries& s : series) {
    if (s.y.size() != x.size()) throw ValidationError("plot series length mismatch");
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      if (first || v < ymin) ymin = v;
      if (first || v > ymax) ymax = v;
      first = false;
    }
  }
  if (first) throw ValidationError("plot series contain no finite values");
  if (ymax == ymin) {
    ymax += 1.0;
    ymin -= 1.0;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  const double xmin = x.front();
  const double xmax = x.back();
  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  auto px = [&](double v) { return kMarginL + (v - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double v) { return kMarginT + (ymax - v) / (ymax - ymin) * plot_h; };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << kMarginL << "\" y=\"" << kHeight - 16
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << axis_label(xmin) << "</text>\n";
  out << "<text x=\"" << kWidth - kMarginR << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << axis_label(xmax)
      << "</text>\n";
  out << "<text x=\"" << kMarginL - 6 << "\" y=\"" << py(ymin)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << axis_label(ymin)
      << "</text>\n";
  out << "<text x=\"" << kMarginL - 6 << "\" y=\"" << py(ymax) + 10
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << axis_label(ymax)
      << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double v = series[si].y[i];
      if (!std::isfinite(v)) continue;
      out << axis_label(px(x[i])) << ',' << axis_label(py(v)) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << kMarginL + 8 + 110.0 * static_cast<double>(si) << "\" y=\""
        << kMarginT - 8 << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
        << "\">" << series[si].label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace kgrs::io
