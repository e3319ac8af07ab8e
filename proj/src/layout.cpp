#include "ks/layout.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace ks {

namespace {

std::string num(double v) {
  if (std::fabs(v) < 5e-4) v = 0;  // avoid "-0.000"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string asy_label(VertexId v) {
  std::string out;
  for (char c : vertex_name(v)) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out.push_back(c);
    else
      out += "{\\char" + std::to_string(static_cast<int>(c)) + "}";
  }
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

double lookup(const std::map<std::size_t, double>& m, std::size_t e, double fallback) {
  auto it = m.find(e);
  return it == m.end() ? fallback : it->second;
}

Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }

// Cubic segments through pts: interior tangents are half the chord of the
// neighbours, end tangents the adjacent chord scaled by curl; control arms
// shrink as tension grows.
std::string svg_curve(const std::vector<Point>& pts, double tension, double curl) {
  auto flip = [](Point p) { return Point{p.x, -p.y}; };
  std::size_t m = pts.size();
  std::vector<Point> tangent(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (k == 0)
      tangent[k] = curl * (pts[1] - pts[0]);
    else if (k + 1 == m)
      tangent[k] = curl * (pts[m - 1] - pts[m - 2]);
    else
      tangent[k] = 0.5 * (pts[k + 1] - pts[k - 1]);
  }
  Point p0 = flip(pts[0]);
  std::string d = "M " + num(p0.x) + " " + num(p0.y);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    Point c1 = flip(pts[k] + (1.0 / (3.0 * tension)) * tangent[k]);
    Point c2 = flip(pts[k + 1] - (1.0 / (3.0 * tension)) * tangent[k + 1]);
    Point p = flip(pts[k + 1]);
    d += " C " + num(c1.x) + " " + num(c1.y) + " " + num(c2.x) + " " + num(c2.y) + " " + num(p.x) + " " + num(p.y);
  }
  return d;
}

}  // namespace

Layout place_vertices(const Hypergraph& h, const Loop& loop, const LayoutConfig& cfg) {
  Layout out;
  std::size_t n = loop.size();
  const double pi = std::numbers::pi;
  std::vector<Point> corner(n);
  for (std::size_t i = 0; i < n; ++i) {
    double angle = pi / 2 + 2 * pi * static_cast<double>(i) / static_cast<double>(n);
    corner[i] = {cfg.radius * std::cos(angle), cfg.radius * std::sin(angle)};
    out.position[loop.joints[i]] = corner[i];
  }
  // Edge i runs from joint i-1 to joint i; its other vertices sit evenly on the side.
  for (std::size_t i = 0; i < n; ++i) {
    Point a = corner[(i + n - 1) % n];
    Point b = corner[i];
    VertexId in = loop.joints[(i + n - 1) % n];
    VertexId outj = loop.joints[i];
    std::vector<VertexId> inner;
    for (auto v : h.edge(loop.edges[i]))
      if (v != in && v != outj) inner.push_back(v);
    for (std::size_t j = 0; j < inner.size(); ++j) {
      double t = static_cast<double>(j + 1) / static_cast<double>(inner.size() + 1);
      out.position.try_emplace(inner[j], a + t * (b - a));
    }
  }

  auto cls = classify_edges(h, loop);
  std::vector<VertexId> pending;
  for (auto v : cls.free_vertices) {
    auto it = cfg.free_positions.find(v);
    if (it != cfg.free_positions.end())
      out.position[v] = it->second;
    else
      pending.push_back(v);
  }
  std::size_t per_column = std::max<std::size_t>(1, cfg.column_height);
  std::size_t columns = (pending.size() + per_column - 1) / per_column;
  for (std::size_t c = 0; c < columns; ++c) {
    std::size_t first = c * per_column;
    std::size_t count = std::min(per_column, pending.size() - first);
    // Columns start half a spacing right of the centre so none runs through it.
    double x = cfg.column_spacing * (static_cast<double>(c) - static_cast<double>(columns) / 2.0 + 0.5) +
               cfg.column_spacing / 2.0;
    double step = cfg.radius * 0.35;
    for (std::size_t j = 0; j < count; ++j) {
      double y = step * (static_cast<double>(count - 1) / 2.0 - static_cast<double>(j));
      out.position[pending[first + j]] = {x, y};
    }
  }
  return out;
}

std::string emit_layout(const Hypergraph& h, const Loop& loop, const LayoutConfig& cfg) {
  if (!is_valid_loop(h, loop)) throw std::invalid_argument("emit_layout: not a loop of this hypergraph");
  if (!(cfg.tension > 0)) throw std::invalid_argument("emit_layout: tension must be positive");
  for (const auto& [e, t] : cfg.edge_tension)
    if (!(t > 0)) throw std::invalid_argument("emit_layout: tension must be positive (edge " + std::to_string(e) + ")");

  auto layout = place_vertices(h, loop, cfg);
  std::size_t n = loop.size();
  std::vector<char> is_polygon(h.edge_count(), 0);
  for (auto e : loop.edges) is_polygon[e] = 1;

  std::string out;
  if (cfg.backend == LayoutBackend::Asymptote) {
    out += "// " + serialize_mmp(h) + "\n";
    out += "size(300);\n";
    out += "defaultpen(fontsize(7pt));\n";
    auto pair = [&](VertexId v) {
      auto p = layout.position.at(v);
      return "(" + num(p.x) + "," + num(p.y) + ")";
    };
    for (std::size_t i = 0; i < n; ++i)
      out += "draw(" + pair(loop.joints[(i + n - 1) % n]) + "--" + pair(loop.joints[i]) + ");\n";
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
      if (is_polygon[e]) continue;
      double t = lookup(cfg.edge_tension, e, cfg.tension);
      double c = lookup(cfg.edge_curl, e, cfg.curl);
      auto edge = h.edge(e);
      std::string path;
      for (std::size_t k = 0; k < edge.size(); ++k) {
        if (k) path += "..tension " + num(t) + "..";
        path += pair(edge[k]);
        if (k == 0 || k + 1 == edge.size()) path += "{curl " + num(c) + "}";
      }
      out += "draw(" + path + ", blue);\n";
    }
    for (auto v : h.vertices()) {
      out += "dot(" + pair(v) + ");\n";
      out += "label(\"" + asy_label(v) + "\", " + pair(v) + ", NE);\n";
    }
  } else {
    double pad = 20;
    double lo = -cfg.radius - pad;
    double size = 2 * (cfg.radius + pad);
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(lo) + " " + num(lo) + " " + num(size) + " " +
           num(size) + "\">\n";
    out += "<desc>" + xml_escape(serialize_mmp(h)) + "</desc>\n";
    for (std::size_t i = 0; i < n; ++i) {
      auto a = layout.position.at(loop.joints[(i + n - 1) % n]);
      auto b = layout.position.at(loop.joints[i]);
      out += "<line x1=\"" + num(a.x) + "\" y1=\"" + num(-a.y) + "\" x2=\"" + num(b.x) + "\" y2=\"" + num(-b.y) +
             "\" stroke=\"black\"/>\n";
    }
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
      if (is_polygon[e]) continue;
      std::vector<Point> pts;
      for (auto v : h.edge(e)) pts.push_back(layout.position.at(v));
      double t = lookup(cfg.edge_tension, e, cfg.tension);
      double c = lookup(cfg.edge_curl, e, cfg.curl);
      out += "<path d=\"" + svg_curve(pts, t, c) + "\" fill=\"none\" stroke=\"blue\"/>\n";
    }
    for (auto v : h.vertices()) {
      auto p = layout.position.at(v);
      out += "<circle cx=\"" + num(p.x) + "\" cy=\"" + num(-p.y) + "\" r=\"2\"/>\n";
      out += "<text x=\"" + num(p.x + 3) + "\" y=\"" + num(-p.y - 3) + "\" font-size=\"7\">" +
             xml_escape(vertex_name(v)) + "</text>\n";
    }
    out += "</svg>\n";
  }
  return out;
}

}  // namespace ks
