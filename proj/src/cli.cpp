#include "extdiff/cli.hpp"

#include "extdiff/difference.hpp"
#include "extdiff/error.hpp"
#include "extdiff/io.hpp"
#include "extdiff/refine.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace extdiff::cli {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// CLI11 consumes a reversed argument vector.
void parse(CLI::App& app, const std::vector<std::string>& args) {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
}

int parse_or_exit(CLI::App& app, const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool& done) {
    done = true;
    try {
        parse(app, args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadFlags;
    }
    done = false;
    return kExitOk;
}

bool parse_reals(const std::string& text, std::size_t count, std::vector<double>& out) {
    out.clear();
    std::size_t pos = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t comma = text.find(',', pos);
        const bool last = k + 1 == count;
        if (last != (comma == std::string::npos)) return false;
        const std::string tok = text.substr(pos, last ? std::string::npos : comma - pos);
        if (tok.empty()) return false;
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size() || !std::isfinite(v)) return false;
        out.push_back(v);
        pos = comma + 1;
    }
    return true;
}

void print_solution(std::ostream& out, const std::string& prefix, const DifferenceSolution& s) {
    const Diagnostics& d = s.diagnostics;
    out << prefix << "epsilon=" << fmt(s.epsilon) << "\n";
    out << prefix << "achieved_hausdorff=" << fmt(s.achieved_hausdorff) << "\n";
    out << prefix << "X_vertices=" << s.X.size() << "\n";
    out << prefix << "scope_bound=" << fmt(d.scope_bound) << "\n";
    out << prefix << "r_in_X=" << fmt(d.r_in_X) << "\n";
    out << prefix << "r_in_bounds=" << fmt(d.r_in_bounds.lo) << "," << fmt(d.r_in_bounds.hi) << "\n";
    out << prefix << "R_out_X=" << fmt(d.R_out_X) << "\n";
    out << prefix << "R_out_bounds=" << fmt(d.R_out_bounds.lo) << "," << fmt(d.R_out_bounds.hi) << "\n";
    out << prefix << "radius_bounds_hold=" << (d.radius_bounds_hold ? "true" : "false") << "\n";
}

}  // namespace

int cmd_diff(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Extended difference A - B of two convex polygons", "diff"};
    std::string a_path, b_path, out_path, svg_path, dump_path;
    std::size_t m = 128;
    std::string recon = "halfplane", subadd = "barycentric", refine_spec = "none";
    bool strict = false;
    app.add_option("--a", a_path, "polygon file for A")->required();
    app.add_option("--b", b_path, "polygon file for B")->required();
    app.add_option("--m", m, "number of net directions")->check(CLI::Range(std::size_t{8}, std::size_t{4096}));
    app.add_option("--recon", recon)->check(CLI::IsMember({"halfplane", "radial"}));
    app.add_option("--subadd", subadd)->check(CLI::IsMember({"barycentric", "scaled", "unit"}));
    app.add_flag("--strict-nonneg", strict, "require x_i >= 0");
    app.add_option("--refine", refine_spec, "l2 | l2-anchor:FILE | none");
    app.add_option("--out", out_path, "solution file to write");
    app.add_option("--svg", svg_path, "SVG overlay to write");
    app.add_option("--dump-lp", dump_path, "write the assembled program as text");
    bool done = false;
    const int rc = parse_or_exit(app, args, out, err, done);
    if (done) return rc;

    std::string anchor_path;
    if (refine_spec.rfind("l2-anchor:", 0) == 0) {
        anchor_path = refine_spec.substr(10);
        if (anchor_path.empty()) {
            err << "error: --refine l2-anchor needs a file\n";
            return kExitBadFlags;
        }
    } else if (refine_spec != "l2" && refine_spec != "none") {
        err << "error: --refine must be l2, l2-anchor:FILE or none\n";
        return kExitBadFlags;
    }

    DifferenceOptions opts;
    opts.m = m;
    opts.reconstruction = recon == "radial" ? Reconstruction::RadialHull : Reconstruction::Halfplane;
    opts.subadditivity = subadd == "scaled" ? Subadditivity::Scaled : subadd == "unit" ? Subadditivity::Unit : Subadditivity::Barycentric;
    opts.strict_nonneg = strict;

    io::PolygonFile pa, pb;
    std::optional<io::PolygonFile> anchor;
    try {
        pa = io::read_polygon(a_path);
        pb = io::read_polygon(b_path);
        if (!anchor_path.empty()) anchor = io::read_polygon(anchor_path);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadFile;
    }

    DifferenceSolution reported;
    std::string refine_mode = "none";
    try {
        if (!dump_path.empty()) {
            std::ofstream dump(dump_path);
            if (!dump) throw Error(ErrorKind::IoError, "cannot open " + dump_path);
            lp::write_lp_text(assemble_lp(pa.polygon, pb.polygon, build_net(m), opts).program, dump);
        }
        if (refine_spec == "none") {
            reported = extended_difference(pa.polygon, pb.polygon, opts);
            print_solution(out, "", reported);
            out << "lp_unique=" << (reported.diagnostics.lp_unique ? "true" : "false") << "\n";
        } else {
            const PenaltyFunctional pen = anchor ? PenaltyFunctional::l2_anchor(sample_support(anchor->polygon, build_net(m)))
                                                 : PenaltyFunctional::l2_origin();
            refine_mode = anchor ? "l2-anchor" : "l2";
            const RefinedSolution r = refine(pa.polygon, pb.polygon, opts, pen);
            print_solution(out, "", r.base);
            out << "lp_unique=" << (r.base.diagnostics.lp_unique ? "true" : "false") << "\n";
            print_solution(out, "refined.", r.refined);
            out << "refined.penalty=" << fmt(r.penalty_value) << "\n";
            out << "refined.converged=" << (r.converged ? "true" : "false") << "\n";
            out << "refined.iterations=" << r.iterations << "\n";
            reported = r.refined;
            reported.diagnostics.lp_unique = r.base.diagnostics.lp_unique;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::IoError ? kExitBadFile : kExitSolver;
    }
    out << "m=" << m << "\n";
    out << "reconstruction=" << recon << "\n";
    out << "subadditivity=" << subadd << "\n";

    try {
        if (!out_path.empty()) io::write_text_file(out_path, io::write_solution(io::to_file(reported, refine_mode)));
        if (!svg_path.empty()) io::render_svg(pa.polygon, pb.polygon, reported, svg_path);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadFile;
    }
    return kExitOk;
}

int cmd_closed_form(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty() || (args[0] != "interval" && args[0] != "ball")) {
        err << "error: expected 'interval' or 'ball'\n";
        return kExitBadFlags;
    }
    const std::vector<std::string> rest(args.begin() + 1, args.end());
    std::vector<double> v;
    if (args[0] == "interval") {
        CLI::App app{"Closed-form difference of intervals", "interval"};
        std::string a, b, pa, pb;
        app.add_option("--a", a, "LO,HI");
        app.add_option("--b", b, "LO,HI");
        app.add_option("a_pos", pa, "LO,HI");
        app.add_option("b_pos", pb, "LO,HI");
        bool done = false;
        const int rc = parse_or_exit(app, rest, out, err, done);
        if (done) return rc;
        if (a.empty()) a = pa;
        if (b.empty()) b = pb;
        Interval1 ia, ib;
        if (!parse_reals(a, 2, v)) {
            err << "error: A must be LO,HI\n";
            return kExitBadFlags;
        }
        ia = {v[0], v[1]};
        if (!parse_reals(b, 2, v)) {
            err << "error: B must be LO,HI\n";
            return kExitBadFlags;
        }
        ib = {v[0], v[1]};
        if (ia.lo > ia.hi || ib.lo > ib.hi) {
            err << "error: intervals need LO <= HI\n";
            return kExitBadFlags;
        }
        const Interval1 r = interval_difference(ia, ib);
        if (r.lo == r.hi) {
            out << "kind=point\nvalue=" << fmt(r.lo) << "\n";
        } else {
            out << "kind=interval\nlo=" << fmt(r.lo) << "\nhi=" << fmt(r.hi) << "\n";
        }
        return kExitOk;
    }
    CLI::App app{"Closed-form difference of discs", "ball"};
    std::string c1, c2;
    std::string r1, r2;
    app.add_option("--c1", c1, "X,Y")->required();
    app.add_option("--r1", r1, "radius")->required();
    app.add_option("--c2", c2, "X,Y")->required();
    app.add_option("--r2", r2, "radius")->required();
    bool done = false;
    const int rc = parse_or_exit(app, rest, out, err, done);
    if (done) return rc;
    Ball2 b1, b2;
    std::vector<double> rv;
    if (!parse_reals(c1, 2, v) || !parse_reals(r1, 1, rv) || !(rv[0] >= 0.0)) {
        err << "error: malformed first disc\n";
        return kExitBadFlags;
    }
    b1 = {{v[0], v[1]}, rv[0]};
    if (!parse_reals(c2, 2, v) || !parse_reals(r2, 1, rv) || !(rv[0] >= 0.0)) {
        err << "error: malformed second disc\n";
        return kExitBadFlags;
    }
    b2 = {{v[0], v[1]}, rv[0]};
    const Ball2 r = ball_difference(b1, b2);
    out << "kind=" << (r.radius == 0.0 ? "point" : "ball") << "\n";
    out << "center=" << fmt(r.center.x) << "," << fmt(r.center.y) << "\n";
    out << "radius=" << fmt(r.radius) << "\n";
    return kExitOk;
}

int cmd_check(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Randomized property suite", "check"};
    CheckConfig cfg;
    app.add_option("--trials", cfg.trials, "number of random instances");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--m", cfg.m, "number of net directions")->check(CLI::Range(std::size_t{8}, std::size_t{1024}));
    bool done = false;
    const int rc = parse_or_exit(app, args, out, err, done);
    if (done) return rc;
    try {
        return run_checks(cfg, out) ? kExitOk : kExitCheckFailed;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    const char* usage = "usage: extdiff <diff|interval|ball|check> [options]\n";
    if (argc < 2) {
        err << usage;
        return kExitBadFlags;
    }
    const std::string sub = argv[1];
    std::vector<std::string> rest(argv + 2, argv + argc);
    if (sub == "diff") return cmd_diff(rest, out, err);
    if (sub == "check") return cmd_check(rest, out, err);
    if (sub == "interval" || sub == "ball") {
        rest.insert(rest.begin(), sub);
        return cmd_closed_form(rest, out, err);
    }
    if (sub == "-h" || sub == "--help") {
        out << usage;
        return kExitOk;
    }
    err << usage;
    return kExitBadFlags;
}

}  // namespace extdiff::cli
