#pragma once

#include "extdiff/difference.hpp"
#include "extdiff/geometry.hpp"

#include <string>
#include <vector>

namespace extdiff::io {

struct PolygonFile {
    std::string name;
    ConvexPolygon polygon;
};

/// {"vertices": [[x, y], ...], "name": "..."}; canonicalizes. Throws ParseError.
PolygonFile parse_polygon(const std::string& text);
/// Throws IoError when the file cannot be read, ParseError when it is malformed.
PolygonFile read_polygon(const std::string& path);
std::string write_polygon(const PolygonFile& pf);

struct SolutionFile {
    double epsilon = 0.0;
    double achieved_hausdorff = 0.0;
    std::size_t m = 0;
    std::string reconstruction = "halfplane";
    std::string subadditivity = "barycentric";
    bool strict_nonneg = false;
    std::string refine = "none";
    std::vector<double> x_values;
    std::vector<Point2> X_vertices;
    std::vector<Point2> B_plus_X_vertices;
    double scope_bound = 0.0;
    double r_in_lo = 0.0, r_in_hi = 0.0;
    double R_out_lo = 0.0, R_out_hi = 0.0;
    bool lp_unique = false;

    friend bool operator==(const SolutionFile&, const SolutionFile&) = default;
};

SolutionFile to_file(const DifferenceSolution& sol, const std::string& refine_mode);
std::string write_solution(const SolutionFile& sf);
/// Throws ParseError, including when x_values does not have m entries.
SolutionFile parse_solution(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

std::string render_svg(const ConvexPolygon& a, const ConvexPolygon& b, const ConvexPolygon& x,
                       const ConvexPolygon& b_plus_x);
/// Throws IoError.
void render_svg(const ConvexPolygon& a, const ConvexPolygon& b, const DifferenceSolution& sol, const std::string& path);

std::string to_string(Reconstruction r);
std::string to_string(Subadditivity s);

}  // namespace extdiff::io
