#include "ri/outputs.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace ri {

namespace {

void put_g17(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

}  // namespace

void write_nodes_csv(std::ostream& os, const Tree& tree, int dim) {
    os << "id,parent";
    for (int i = 0; i < dim; ++i) os << ",x" << (i + 1);
    for (int j = 0; j < dim; ++j)
        for (int i = j; i < dim; ++i) os << ",p" << (i + 1) << (j + 1);
    os << ",path_cost\n";
    for (const TreeNode& n : tree.nodes()) {
        if (!n.alive) continue;
        os << n.id << "," << n.parent;
        for (int i = 0; i < dim; ++i) {
            os << ",";
            put_g17(os, n.state.x[i]);
        }
        for (int j = 0; j < dim; ++j)
            for (int i = j; i < dim; ++i) {
                os << ",";
                put_g17(os, n.state.P(i, j));
            }
        os << ",";
        put_g17(os, n.path_cost);
        os << "\n";
    }
}

void write_edges_csv(std::ostream& os, const Tree& tree) {
    os << "parent_id,child_id,edge_cost\n";
    for (const TreeNode& n : tree.nodes()) {
        if (!n.alive || n.parent < 0) continue;
        os << n.parent << "," << n.id << ",";
        put_g17(os, n.edge_cost);
        os << "\n";
    }
}

void write_cost_curve_csv(std::ostream& os,
                          const std::vector<std::pair<int, double>>& curve) {
    os << "iter,best_cost\n";
    for (const auto& [iter, cost] : curve) {
        os << iter << ",";
        put_g17(os, cost);
        os << "\n";
    }
}

std::string report_to_json(const RunReport& r) {
    nlohmann::json j;
    j["label"] = r.label;
    j["seed"] = r.seed;
    j["n_nodes"] = r.n_nodes;
    j["alpha"] = r.alpha;
    j["found"] = r.found;
    j["best_cost"] = r.best_cost;
    j["euclid_len"] = r.euclid_len;
    j["info_bits"] = r.info_bits;
    j["nodes_alive"] = r.nodes_alive;
    j["nodes_total"] = r.nodes_total;
    j["edges"] = r.edges;
    j["rejected"] = r.rejected;
    j["wall_time_s"] = r.wall_time_s;
    return j.dump(2) + "\n";
}

namespace {

/// World-to-canvas mapping with a flipped y axis and fixed-precision output.
struct Canvas {
    double wx0, wy0, wx1, wy1;
    double scale, pad, width, height;

    Canvas(double x0, double y0, double x1, double y1) {
        wx0 = x0, wy0 = y0, wx1 = x1, wy1 = y1;
        pad = 20.0;
        const double target = 760.0;
        scale = target / std::max(wx1 - wx0, 1e-12);
        width = 2 * pad + (wx1 - wx0) * scale;
        height = 2 * pad + (wy1 - wy0) * scale;
    }
    double sx(double x) const { return pad + (x - wx0) * scale; }
    double sy(double y) const { return pad + (wy1 - y) * scale; }
};

std::string f3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

void svg_line(std::ostream& os, const Canvas& c, double x0, double y0, double x1,
              double y1, const char* style) {
    os << "<line x1=\"" << f3(c.sx(x0)) << "\" y1=\"" << f3(c.sy(y0)) << "\" x2=\""
       << f3(c.sx(x1)) << "\" y2=\"" << f3(c.sy(y1)) << "\" " << style << "/>\n";
}

void svg_rect(std::ostream& os, const Canvas& c, double x0, double y0, double x1,
              double y1, const char* style) {
    os << "<rect x=\"" << f3(c.sx(x0)) << "\" y=\"" << f3(c.sy(y1)) << "\" width=\""
       << f3((x1 - x0) * c.scale) << "\" height=\"" << f3((y1 - y0) * c.scale)
       << "\" " << style << "/>\n";
}

void svg_ellipse(std::ostream& os, const Canvas& c, const Vec& x,
                 const SymMatrix& P_full, double chi2, const char* style) {
    SymMatrix P = P_full;
    if (P_full.dim() > 2) {  // marginal of the first two coordinates
        P = SymMatrix(2);
        P.set(0, 0, P_full(0, 0));
        P.set(1, 1, P_full(1, 1));
        P.set(0, 1, P_full(0, 1));
    }
    EigResult e = sym_eig(P);
    const double r_minor = std::sqrt(std::max(0.0, chi2 * e.values[0])) * c.scale;
    const double r_major = std::sqrt(std::max(0.0, chi2 * e.values[1])) * c.scale;
    const double ang = -std::atan2(e.vectors(1, 1), e.vectors(0, 1)) * 180.0 /
                       3.14159265358979323846;
    const std::string cx = f3(c.sx(x[0])), cy = f3(c.sy(x[1]));
    os << "<ellipse cx=\"" << cx << "\" cy=\"" << cy << "\" rx=\"" << f3(r_major)
       << "\" ry=\"" << f3(r_minor) << "\" transform=\"rotate(" << f3(ang) << " "
       << cx << " " << cy << ")\" " << style << "/>\n";
}

constexpr const char* kObstacleStyle =
    "fill=\"#9aa0a6\" stroke=\"#5f6368\" stroke-width=\"1\"";
constexpr const char* kGoalStyle =
    "fill=\"none\" stroke=\"#1a73e8\" stroke-width=\"1.5\" stroke-dasharray=\"6 3\"";
constexpr const char* kTreeStyle = "stroke=\"#d9d9d9\" stroke-width=\"0.6\"";
constexpr const char* kPathStyle = "stroke=\"#000000\" stroke-width=\"1.8\"";
constexpr const char* kNodeEllipseStyle =
    "fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"";
constexpr const char* kPropEllipseStyle =
    "fill=\"none\" stroke=\"#1a73e8\" stroke-width=\"0.8\"";
constexpr const char* kFrameStyle =
    "fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"";

void write_svg_1d(std::ostream& os, const Scenario& scn, const Tree& tree,
                  const PiecewisePath* best_path) {
    // 1-D scenes live in the (x, P) plane: growth segments slope up with
    // the noise intensity, measurements drop vertically.
    double pmax = scn.goal.P_max(0, 0);
    pmax = std::max(pmax, scn.init.P(0, 0));
    for (const TreeNode& n : tree.nodes())
        if (n.alive) pmax = std::max(pmax, n.state.P(0, 0));
    const double w = scn.params.W(0, 0);
    if (best_path)
        for (size_t i = 0; i + 1 < best_path->samples().size(); ++i) {
            const auto& a = best_path->samples()[i];
            const auto& b = best_path->samples()[i + 1];
            const double len = std::abs(b.state.x[0] - a.state.x[0]);
            pmax = std::max(pmax, a.state.P(0, 0) + len * w);
        }
    Canvas c(scn.bounds.lo[0], 0.0, scn.bounds.hi[0], pmax * 1.05);

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f3(c.width)
       << "\" height=\"" << f3(c.height) << "\">\n";
    svg_rect(os, c, c.wx0, c.wy0, c.wx1, c.wy1, kFrameStyle);
    for (const Obstacle& o : scn.obstacles)
        svg_rect(os, c, o.lo[0], c.wy0, o.hi[0], c.wy1, kObstacleStyle);
    svg_rect(os, c, scn.goal.x_lo[0], c.wy0, scn.goal.x_hi[0], scn.goal.P_max(0, 0),
             kGoalStyle);
    for (const TreeNode& n : tree.nodes())
        if (n.alive && n.parent >= 0)
            svg_line(os, c, tree.node(n.parent).state.x[0],
                     tree.node(n.parent).state.P(0, 0), n.state.x[0],
                     n.state.P(0, 0), kTreeStyle);
    if (best_path) {
        const auto& s = best_path->samples();
        for (size_t i = 0; i + 1 < s.size(); ++i) {
            const double x0 = s[i].state.x[0], p0 = s[i].state.P(0, 0);
            const double x1 = s[i + 1].state.x[0], p1 = s[i + 1].state.P(0, 0);
            const double grown = p0 + std::abs(x1 - x0) * w;
            svg_line(os, c, x0, p0, x1, grown, kPropEllipseStyle);
            svg_line(os, c, x1, grown, x1, p1, kPathStyle);
        }
    }
    os << "<circle cx=\"" << f3(c.sx(scn.init.x[0])) << "\" cy=\""
       << f3(c.sy(scn.init.P(0, 0)))
       << "\" r=\"3.5\" fill=\"#d93025\" stroke=\"none\"/>\n";
    os << "</svg>\n";
}

void write_svg_2d(std::ostream& os, const Scenario& scn, const Tree& tree,
                  const PiecewisePath* best_path) {
    Canvas c(scn.bounds.lo[0], scn.bounds.lo[1], scn.bounds.hi[0], scn.bounds.hi[1]);
    const double chi2 = scn.chi2.value;

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f3(c.width)
       << "\" height=\"" << f3(c.height) << "\">\n";
    svg_rect(os, c, c.wx0, c.wy0, c.wx1, c.wy1, kFrameStyle);
    for (const Obstacle& o : scn.obstacles) {
        if (o.kind == Obstacle::Kind::Box) {
            svg_rect(os, c, o.lo[0], o.lo[1], o.hi[0], o.hi[1], kObstacleStyle);
        } else {
            os << "<polygon points=\"";
            for (size_t i = 0; i < o.verts.size(); ++i) {
                if (i) os << " ";
                os << f3(c.sx(o.verts[i][0])) << "," << f3(c.sy(o.verts[i][1]));
            }
            os << "\" " << kObstacleStyle << "/>\n";
        }
    }
    svg_rect(os, c, scn.goal.x_lo[0], scn.goal.x_lo[1], scn.goal.x_hi[0],
             scn.goal.x_hi[1], kGoalStyle);
    for (const TreeNode& n : tree.nodes())
        if (n.alive && n.parent >= 0)
            svg_line(os, c, tree.node(n.parent).state.x[0],
                     tree.node(n.parent).state.x[1], n.state.x[0], n.state.x[1],
                     kTreeStyle);
    if (best_path) {
        const auto& s = best_path->samples();
        const double step = scn.planner.ds;
        for (size_t i = 0; i + 1 < s.size(); ++i) {
            const UncertainState& a = s[i].state;
            const UncertainState& b = s[i + 1].state;
            const double len = d_cont(a.x, b.x);
            for (double t = step; t < len; t += step) {
                const Vec xm = a.x + (b.x - a.x) * (t / len);
                svg_ellipse(os, c, xm, propagate(a.P, t, scn.params.W), chi2,
                            kPropEllipseStyle);
            }
            if (len > 0.0)
                svg_ellipse(os, c, b.x, propagate(a.P, len, scn.params.W), chi2,
                            kPropEllipseStyle);
            svg_line(os, c, a.x[0], a.x[1], b.x[0], b.x[1], kPathStyle);
        }
        for (const PathSample& ps : s)
            svg_ellipse(os, c, ps.state.x, ps.state.P, chi2, kNodeEllipseStyle);
    }
    os << "<circle cx=\"" << f3(c.sx(scn.init.x[0])) << "\" cy=\""
       << f3(c.sy(scn.init.x[1]))
       << "\" r=\"3.5\" fill=\"#d93025\" stroke=\"none\"/>\n";
    os << "</svg>\n";
}

}  // namespace

void write_scene_svg(std::ostream& os, const Scenario& scn, const Tree& tree,
                     const PiecewisePath* best_path) {
    if (scn.dim == 1)
        write_svg_1d(os, scn, tree, best_path);
    else
        write_svg_2d(os, scn, tree, best_path);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot write file: " + tmp);
        f << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("cannot rename into place: " + path);
}

}  // namespace ri
