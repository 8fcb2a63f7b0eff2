#include "extdiff/io.hpp"

#include "extdiff/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace extdiff::io {

using nlohmann::json;

namespace {

std::vector<Point2> parse_points(const json& arr, const char* field) {
    if (!arr.is_array()) throw Error(ErrorKind::ParseError, std::string(field) + " must be an array");
    std::vector<Point2> pts;
    for (const json& p : arr) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw Error(ErrorKind::ParseError, std::string(field) + " entries must be [x, y] pairs");
        const Point2 q{p[0].get<double>(), p[1].get<double>()};
        if (!std::isfinite(q.x) || !std::isfinite(q.y)) throw Error(ErrorKind::ParseError, "non-finite coordinate");
        pts.push_back(q);
    }
    return pts;
}

json points_json(const std::vector<Point2>& pts) {
    json arr = json::array();
    for (const Point2& p : pts) arr.push_back({p.x, p.y});
    return arr;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field ") + key);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("bad field ") + key + ": " + e.what());
    }
}

}  // namespace

PolygonFile parse_polygon(const std::string& text) {
    const json j = parse_json(text);
    if (!j.is_object() || !j.contains("vertices")) throw Error(ErrorKind::ParseError, "polygon file needs a vertices field");
    const auto pts = parse_points(j["vertices"], "vertices");
    if (pts.empty()) throw Error(ErrorKind::ParseError, "polygon has no vertices");
    PolygonFile pf;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw Error(ErrorKind::ParseError, "name must be a string");
        pf.name = j["name"].get<std::string>();
    }
    pf.polygon = canonicalize(pts);
    return pf;
}

PolygonFile read_polygon(const std::string& path) { return parse_polygon(read_text_file(path)); }

std::string write_polygon(const PolygonFile& pf) {
    json j;
    if (!pf.name.empty()) j["name"] = pf.name;
    j["vertices"] = points_json(pf.polygon.vertices());
    return j.dump(2) + "\n";
}

std::string to_string(Reconstruction r) { return r == Reconstruction::Halfplane ? "halfplane" : "radial"; }

std::string to_string(Subadditivity s) {
    switch (s) {
        case Subadditivity::Barycentric: return "barycentric";
        case Subadditivity::Scaled: return "scaled";
        case Subadditivity::Unit: return "unit";
    }
    return "barycentric";
}

SolutionFile to_file(const DifferenceSolution& sol, const std::string& refine_mode) {
    SolutionFile sf;
    sf.epsilon = sol.epsilon;
    sf.achieved_hausdorff = sol.achieved_hausdorff;
    sf.m = sol.x_values.size();
    sf.reconstruction = to_string(sol.options.reconstruction);
    sf.subadditivity = to_string(sol.options.subadditivity);
    sf.strict_nonneg = sol.options.strict_nonneg;
    sf.refine = refine_mode;
    sf.x_values = sol.x_values.values;
    sf.X_vertices = sol.X.vertices();
    sf.B_plus_X_vertices = sol.B_plus_X.vertices();
    const Diagnostics& d = sol.diagnostics;
    sf.scope_bound = d.scope_bound;
    sf.r_in_lo = d.r_in_bounds.lo;
    sf.r_in_hi = d.r_in_bounds.hi;
    sf.R_out_lo = d.R_out_bounds.lo;
    sf.R_out_hi = d.R_out_bounds.hi;
    sf.lp_unique = d.lp_unique;
    return sf;
}

std::string write_solution(const SolutionFile& sf) {
    json j;
    j["epsilon"] = sf.epsilon;
    j["achieved_hausdorff"] = sf.achieved_hausdorff;
    j["m"] = sf.m;
    j["mode"] = {{"reconstruction", sf.reconstruction},
                 {"subadditivity", sf.subadditivity},
                 {"strict_nonneg", sf.strict_nonneg},
                 {"refine", sf.refine}};
    j["x_values"] = sf.x_values;
    j["X_vertices"] = points_json(sf.X_vertices);
    j["B_plus_X_vertices"] = points_json(sf.B_plus_X_vertices);
    j["diagnostics"] = {{"scope_bound", sf.scope_bound},
                        {"r_in_bounds", {sf.r_in_lo, sf.r_in_hi}},
                        {"R_out_bounds", {sf.R_out_lo, sf.R_out_hi}},
                        {"lp_unique", sf.lp_unique}};
    return j.dump(2) + "\n";
}

SolutionFile parse_solution(const std::string& text) {
    const json j = parse_json(text);
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "solution file must be an object");
    SolutionFile sf;
    sf.epsilon = field<double>(j, "epsilon");
    sf.achieved_hausdorff = field<double>(j, "achieved_hausdorff");
    sf.m = field<std::size_t>(j, "m");
    const json mode = field<json>(j, "mode");
    sf.reconstruction = field<std::string>(mode, "reconstruction");
    sf.subadditivity = field<std::string>(mode, "subadditivity");
    sf.strict_nonneg = field<bool>(mode, "strict_nonneg");
    sf.refine = field<std::string>(mode, "refine");
    sf.x_values = field<std::vector<double>>(j, "x_values");
    if (sf.x_values.size() != sf.m) throw Error(ErrorKind::ParseError, "x_values length does not match m");
    sf.X_vertices = parse_points(field<json>(j, "X_vertices"), "X_vertices");
    sf.B_plus_X_vertices = parse_points(field<json>(j, "B_plus_X_vertices"), "B_plus_X_vertices");
    const json d = field<json>(j, "diagnostics");
    sf.scope_bound = field<double>(d, "scope_bound");
    const auto rin = field<std::vector<double>>(d, "r_in_bounds");
    const auto rout = field<std::vector<double>>(d, "R_out_bounds");
    if (rin.size() != 2 || rout.size() != 2) throw Error(ErrorKind::ParseError, "radius bounds must be pairs");
    sf.r_in_lo = rin[0];
    sf.r_in_hi = rin[1];
    sf.R_out_lo = rout[0];
    sf.R_out_hi = rout[1];
    sf.lp_unique = field<bool>(d, "lp_unique");
    return sf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
    out << text;
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string path_data(const ConvexPolygon& p) {
    std::string d;
    const auto& v = p.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        d += (i == 0 ? "M" : " L");
        d += num(v[i].x) + " " + num(-v[i].y);
    }
    if (v.size() >= 3) d += " Z";
    return d;
}

struct Layer {
    const char* label;
    const ConvexPolygon* poly;
    const char* colour;
};

}  // namespace

std::string render_svg(const ConvexPolygon& a, const ConvexPolygon& b, const ConvexPolygon& x,
                       const ConvexPolygon& b_plus_x) {
    const Layer layers[] = {{"A", &a, "#1f77b4"}, {"B", &b, "#2ca02c"}, {"B+X", &b_plus_x, "#ff7f0e"}, {"X", &x, "#d62728"}};
    double lo_x = 1e300, lo_y = 1e300, hi_x = -1e300, hi_y = -1e300;
    for (const Layer& l : layers) {
        for (const Point2& p : l.poly->vertices()) {
            lo_x = std::min(lo_x, p.x);
            hi_x = std::max(hi_x, p.x);
            lo_y = std::min(lo_y, -p.y);
            hi_y = std::max(hi_y, -p.y);
        }
    }
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-3});
    const double pad = 0.08 * span;
    const double stroke = 0.006 * span;
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(lo_x - pad) << " " << num(lo_y - pad) << " "
      << num(hi_x - lo_x + 2 * pad) << " " << num(hi_y - lo_y + 2 * pad) << "\" width=\"640\" height=\"640\">\n";
    for (const Layer& l : layers) {
        const ConvexPolygon& p = *l.poly;
        s << "  <g id=\"" << l.label << "\">\n";
        if (p.is_point()) {
            const Point2 v = p.vertices()[0];
            s << "    <circle cx=\"" << num(v.x) << "\" cy=\"" << num(-v.y) << "\" r=\"" << num(2 * stroke) << "\" fill=\""
              << l.colour << "\"/>\n";
        } else {
            s << "    <path d=\"" << path_data(p) << "\" fill=\"" << (p.size() >= 3 ? l.colour : "none")
              << "\" fill-opacity=\"0.25\" stroke=\"" << l.colour << "\" stroke-width=\"" << num(stroke) << "\"/>\n";
        }
        const Point2 at = p.vertices()[0];
        s << "    <text x=\"" << num(at.x) << "\" y=\"" << num(-at.y - stroke * 2) << "\" font-size=\"" << num(0.04 * span)
          << "\" fill=\"" << l.colour << "\">" << (l.label[1] == '+' ? "B&#8853;X" : l.label) << "</text>\n";
        s << "  </g>\n";
    }
    s << "</svg>\n";
    return s.str();
}

void render_svg(const ConvexPolygon& a, const ConvexPolygon& b, const DifferenceSolution& sol, const std::string& path) {
    write_text_file(path, render_svg(a, b, sol.X, sol.B_plus_X));
}

}  // namespace extdiff::io
