#include "ks/geometry.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ks {

Ray canonical_direction(const Ray& r) {
  for (int i = 0; i < 4; ++i) {
    int s = r(i).sign();
    if (s > 0) return r;
    if (s < 0) return -r;
  }
  return r;
}

bool ray_less(const Ray& u, const Ray& v) {
  for (int i = 0; i < 4; ++i) {
    if (u(i) < v(i)) return true;
    if (v(i) < u(i)) return false;
  }
  return false;
}

std::vector<Ray> cell600_vertices() {
  std::vector<Ray> out;
  for (int i = 0; i < 4; ++i)
    for (int s : {2, -2}) {
      Ray r = Ray::Zero();
      r(i) = Golden(s);
      out.push_back(r);
    }
  for (int m = 0; m < 16; ++m) {
    Ray r;
    for (int i = 0; i < 4; ++i) r(i) = Golden((m >> i) & 1 ? -1 : 1);
    out.push_back(r);
  }
  const Golden base[4] = {Golden::tau(), Golden(1), Golden::kappa(), Golden(0)};
  std::array<int, 4> perm = {0, 1, 2, 3};
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) inversions += perm[i] > perm[j];
    if (inversions % 2) continue;
    for (int m = 0; m < 8; ++m) {
      Ray r;
      for (int i = 0; i < 4; ++i) {
        int src = perm[i];
        Golden g = base[src];
        if (src < 3 && ((m >> src) & 1)) g = -g;
        r(i) = g;
      }
      out.push_back(r);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

RaySet600 build_600cell() {
  auto vertices = cell600_vertices();
  if (vertices.size() != 120) throw std::logic_error("600-cell: expected 120 vertices, got " + std::to_string(vertices.size()));

  std::vector<Ray> rays;
  for (const auto& v : vertices) rays.push_back(canonical_direction(v));
  std::sort(rays.begin(), rays.end(), ray_less);
  rays.erase(std::unique(rays.begin(), rays.end(), [](const Ray& a, const Ray& b) { return a == b; }), rays.end());
  if (rays.size() != 60) throw std::logic_error("600-cell: expected 60 rays, got " + std::to_string(rays.size()));

  std::size_t n = rays.size();
  std::vector<std::vector<char>> orth(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) orth[i][j] = orth[j][i] = inner_product(rays[i], rays[j]).sign() == 0;

  RaySet600 out;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!orth[a][b]) continue;
      for (std::size_t c = b + 1; c < n; ++c) {
        if (!orth[a][c] || !orth[b][c]) continue;
        for (std::size_t d = c + 1; d < n; ++d)
          if (orth[a][d] && orth[b][d] && orth[c][d]) out.bases.push_back({a, b, c, d});
      }
    }
  if (out.bases.size() != 75) throw std::logic_error("600-cell: expected 75 bases, got " + std::to_string(out.bases.size()));

  std::vector<int> membership(n, 0);
  std::vector<std::vector<VertexId>> edges;
  for (const auto& basis : out.bases) {
    std::vector<VertexId> e;
    for (auto i : basis) {
      ++membership[i];
      e.push_back(static_cast<VertexId>(i));
    }
    edges.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < n; ++i)
    if (membership[i] != 5) throw std::logic_error("600-cell: ray " + std::to_string(i) + " lies in " + std::to_string(membership[i]) + " bases");

  out.rays = std::move(rays);
  out.hypergraph = Hypergraph(std::move(edges));
  return out;
}

AssignmentReport verify_assignment(const Hypergraph& h, const std::map<VertexId, Ray>& assignment) {
  AssignmentReport report;
  for (auto v : h.vertices()) {
    auto it = assignment.find(v);
    if (it == assignment.end() || it->second.isZero()) report.missing.push_back(v);
  }
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    auto edge = h.edge(e);
    for (std::size_t i = 0; i < edge.size(); ++i)
      for (std::size_t j = i + 1; j < edge.size(); ++j) {
        auto a = assignment.find(edge[i]);
        auto b = assignment.find(edge[j]);
        if (a == assignment.end() || b == assignment.end()) continue;
        Golden p = inner_product(a->second, b->second);
        if (p.sign() != 0) report.violations.push_back({e, edge[i], edge[j], p});
      }
  }
  return report;
}

Golden parse_golden(const std::string& token) {
  auto fail = [&] { return std::invalid_argument("bad golden number token '" + token + "'"); };
  if (token.empty()) throw fail();
  std::string body = token;
  bool negate = false;
  if (body == "t" || body == "k" || body == "-t" || body == "-k") {
    negate = body[0] == '-';
    Golden g = body.back() == 't' ? Golden::tau() : Golden::kappa();
    return negate ? -g : g;
  }
  if (body.back() == 't') {
    // a+bt or a-bt; the sign separating a and b is the last '+' or '-' not at position 0
    auto pos = body.find_last_of("+-");
    if (pos == std::string::npos || pos == 0) throw fail();
    try {
      std::size_t used = 0;
      long long a = std::stoll(body.substr(0, pos), &used);
      if (used != pos) throw fail();
      std::string bs = body.substr(pos, body.size() - pos - 1);
      if (bs.size() == 1) return Golden(a, bs == "-" ? -1 : 1);  // "1-t"
      long long b = std::stoll(bs, &used);
      if (used != bs.size()) throw fail();
      return Golden(a, b);
    } catch (const std::logic_error&) {
      throw fail();
    }
  }
  try {
    std::size_t used = 0;
    long long a = std::stoll(body, &used);
    if (used != body.size()) throw fail();
    return Golden(a);
  } catch (const std::logic_error&) {
    throw fail();
  }
}

Ray parse_ray(const std::string& line) {
  std::istringstream ss(line);
  Ray r;
  std::string tok;
  int i = 0;
  while (ss >> tok) {
    if (i == 4) throw std::invalid_argument("vector line has more than 4 components: " + line);
    r(i++) = parse_golden(tok);
  }
  if (i != 4) throw std::invalid_argument("vector line has fewer than 4 components: " + line);
  return r;
}

std::vector<Ray> parse_vectors(std::istream& in) {
  std::vector<Ray> out;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(parse_ray(line));
  }
  return out;
}

void write_vectors(std::ostream& out, const std::vector<Ray>& rays) {
  for (const auto& r : rays) {
    for (int i = 0; i < 4; ++i) out << (i ? " " : "") << r(i);
    out << '\n';
  }
}

}  // namespace ks
