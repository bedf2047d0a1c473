#include "magnls/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace magnls {

ParseError::ParseError(std::size_t line, const std::string& what)
    : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

// Union-find over vertex indices; half-lines never join components.
std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

bool is_connected(std::size_t n, const std::vector<Edge>& edges) {
  if (n == 0) return false;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& e : edges) {
    if (e.is_half_line()) continue;
    parent[find_root(parent, e.from)] = find_root(parent, e.to);
  }
  const std::size_t root = find_root(parent, 0);
  for (std::size_t v = 1; v < n; ++v)
    if (find_root(parent, v) != root) return false;
  return true;
}

double parse_number(std::string_view s, std::size_t line, std::string_view what) {
  double value = 0.0;
  // from_chars does not accept a leading '+'
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value))
    throw ParseError(line, "invalid " + std::string(what) + " '" + std::string(s) + "'");
  return value;
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) words.push_back(s.substr(i, j - i));
    i = j;
  }
  return words;
}

}  // namespace

MetricGraph::MetricGraph(std::vector<std::string> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  if (vertices_.empty()) throw GraphError("graph has no vertices");
  for (const auto& e : edges_) {
    if (e.from >= vertices_.size()) throw GraphError("edge '" + e.id + "': dangling vertex reference");
    if (e.is_half_line()) {
      if (e.to != no_vertex) throw GraphError("half-line '" + e.id + "' must have exactly one anchor vertex");
      continue;
    }
    if (e.to >= vertices_.size()) throw GraphError("edge '" + e.id + "': dangling vertex reference");
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw GraphError("edge '" + e.id + "': nonpositive length");
  }
  for (auto& e : edges_)
    if (e.is_half_line()) e.length = std::numeric_limits<double>::infinity();
  if (!is_connected(vertices_.size(), edges_)) throw GraphError("graph is disconnected");
}

std::size_t MetricGraph::vertex_index(std::string_view id) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), id);
  if (it == vertices_.end()) throw GraphError("unknown vertex '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::size_t MetricGraph::edge_index(std::string_view id) const {
  auto it = std::find_if(edges_.begin(), edges_.end(), [&](const Edge& e) { return e.id == id; });
  if (it == edges_.end()) throw GraphError("unknown edge '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - edges_.begin());
}

std::size_t MetricGraph::finite_edge_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return !e.is_half_line(); }));
}

std::size_t MetricGraph::half_line_count() const noexcept {
  return edges_.size() - finite_edge_count();
}

std::size_t MetricGraph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (const auto& e : edges_) {
    if (e.from == v) ++d;
    if (e.to == v) ++d;
  }
  return d;
}

MetricGraph MetricGraph::with_potential(std::size_t e, double A) const {
  auto edges = edges_;
  edges.at(e).A = A;
  return MetricGraph(vertices_, std::move(edges));
}

bool Cycle::contains(std::size_t e) const noexcept {
  return std::any_of(steps.begin(), steps.end(), [e](const CycleStep& s) { return s.edge == e; });
}

MetricGraph parse_graph(std::string_view text) {
  std::vector<std::string> vertices;
  std::map<std::string, std::size_t, std::less<>> vertex_ids;
  std::map<std::string, std::size_t, std::less<>> edge_ids;

  struct PendingEdge {
    Edge edge;
    std::string from, to;
    std::size_t line;
  };
  std::vector<PendingEdge> pending;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto words = split_words(line);
    if (words.empty()) continue;

    const auto keyword = words[0];
    if (keyword == "vertex") {
      if (words.size() != 2) throw ParseError(line_no, "expected 'vertex <id>'");
      std::string id(words[1]);
      if (vertex_ids.count(id)) throw ParseError(line_no, "duplicate vertex '" + id + "'");
      vertex_ids.emplace(id, vertices.size());
      vertices.push_back(std::move(id));
      continue;
    }
    if (keyword != "edge" && keyword != "halfline")
      throw ParseError(line_no, "unknown keyword '" + std::string(keyword) + "'");

    const bool half = keyword == "halfline";
    const std::size_t positional = half ? 3 : 4;
    if (words.size() < positional)
      throw ParseError(line_no, half ? "expected 'halfline <id> <v> [A=<float>]'"
                                     : "expected 'edge <id> <v_from> <v_to> length=<float> [A=<float>]'");
    PendingEdge p;
    p.line = line_no;
    p.edge.id = std::string(words[1]);
    p.edge.kind = half ? EdgeKind::half_line : EdgeKind::finite;
    p.from = std::string(words[2]);
    if (!half) p.to = std::string(words[3]);
    if (edge_ids.count(p.edge.id)) throw ParseError(line_no, "duplicate edge '" + p.edge.id + "'");

    bool has_length = false;
    for (std::size_t i = positional; i < words.size(); ++i) {
      const auto eq = words[i].find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value, got '" + std::string(words[i]) + "'");
      const auto key = words[i].substr(0, eq);
      const auto value = words[i].substr(eq + 1);
      if (key == "length" && !half) {
        p.edge.length = parse_number(value, line_no, "length");
        if (!(p.edge.length > 0.0)) throw ParseError(line_no, "nonpositive length");
        has_length = true;
      } else if (key == "A") {
        p.edge.A = parse_number(value, line_no, "A");
      } else {
        throw ParseError(line_no, "unknown attribute '" + std::string(key) + "'");
      }
    }
    if (!half && !has_length) throw ParseError(line_no, "edge '" + p.edge.id + "' is missing length=");
    edge_ids.emplace(p.edge.id, pending.size());
    pending.push_back(std::move(p));
  }

  // Edges may reference vertices declared later in the document.
  std::vector<Edge> edges;
  edges.reserve(pending.size());
  auto resolve = [&](const std::string& id, std::size_t line) {
    auto it = vertex_ids.find(id);
    if (it == vertex_ids.end()) throw ParseError(line, "dangling vertex reference '" + id + "'");
    return it->second;
  };
  for (auto& p : pending) {
    p.edge.from = resolve(p.from, p.line);
    p.edge.to = p.edge.is_half_line() ? no_vertex : resolve(p.to, p.line);
    edges.push_back(std::move(p.edge));
  }
  if (vertices.empty()) throw GraphError("graph has no vertices");
  if (!is_connected(vertices.size(), edges)) throw GraphError("graph is disconnected");
  return MetricGraph(std::move(vertices), std::move(edges));
}

MetricGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

std::string format_graph(const MetricGraph& g) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& v : g.vertices()) out << "vertex " << v << '\n';
  for (const auto& e : g.edges()) {
    if (e.is_half_line()) {
      out << "halfline " << e.id << ' ' << g.vertices()[e.from];
    } else {
      out << "edge " << e.id << ' ' << g.vertices()[e.from] << ' ' << g.vertices()[e.to]
          << " length=" << e.length;
    }
    out << " A=" << e.A << '\n';
  }
  return out.str();
}

int betti_number(const MetricGraph& g) {
  const auto edges = static_cast<int>(g.edge_count());
  const auto vertices = static_cast<int>(g.vertex_count() + g.half_line_count());
  return edges - vertices + 1;
}

std::size_t step_tail(const MetricGraph& g, const CycleStep& step) {
  const auto& e = g.edge(step.edge);
  return step.sign > 0 ? e.from : e.to;
}

std::size_t step_head(const MetricGraph& g, const CycleStep& step) {
  const auto& e = g.edge(step.edge);
  return step.sign > 0 ? e.to : e.from;
}

CycleBasis cycle_basis(const MetricGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    if (edge.is_half_line()) continue;
    incident[edge.from].push_back(e);
    if (edge.to != edge.from) incident[edge.to].push_back(e);
  }

  // BFS tree rooted at vertex 0; parent_edge[v] is the tree edge into v.
  std::vector<std::size_t> parent(n, no_vertex), parent_edge(n, no_vertex), depth(n, 0);
  std::vector<bool> seen(n, false), tree_edge(g.edge_count(), false);
  std::queue<std::size_t> queue;
  seen[0] = true;
  queue.push(0);
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop();
    for (auto e : incident[v]) {
      const auto& edge = g.edge(e);
      const auto w = edge.from == v ? edge.to : edge.from;
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = v;
      parent_edge[w] = e;
      depth[w] = depth[v] + 1;
      tree_edge[e] = true;
      queue.push(w);
    }
  }

  auto tree_step = [&](std::size_t child, bool upward) {
    // Step along the tree edge between child and its parent.
    const auto e = parent_edge[child];
    const auto& edge = g.edge(e);
    const auto tail = upward ? child : parent[child];
    return CycleStep{e, edge.from == tail ? +1 : -1};
  };

  CycleBasis basis;
  basis.betti = betti_number(g);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    if (edge.is_half_line() || tree_edge[e]) continue;

    Cycle cycle;
    cycle.steps.push_back({e, +1});
    // Close the cycle with the tree path from edge.to back to edge.from.
    std::size_t a = edge.to, b = edge.from;
    std::vector<CycleStep> up, down;
    while (a != b) {
      if (depth[a] >= depth[b]) {
        up.push_back(tree_step(a, true));
        a = parent[a];
      } else {
        down.push_back(tree_step(b, false));
        b = parent[b];
      }
    }
    cycle.steps.insert(cycle.steps.end(), up.begin(), up.end());
    cycle.steps.insert(cycle.steps.end(), down.rbegin(), down.rend());
    for (const auto& s : cycle.steps) cycle.length += g.edge(s.edge).length;
    basis.cycles.push_back(std::move(cycle));
  }
  return basis;
}

namespace generators {

MetricGraph tadpole(double half_loop, double A_loop) {
  return MetricGraph({"v0"}, {Edge{"loop", 0, 0, EdgeKind::finite, 2.0 * half_loop, A_loop},
                              Edge{"tail", 0, no_vertex, EdgeKind::half_line, 0.0, 0.0}});
}

MetricGraph line() {
  return MetricGraph({"v0"}, {Edge{"left", 0, no_vertex, EdgeKind::half_line, 0.0, 0.0},
                              Edge{"right", 0, no_vertex, EdgeKind::half_line, 0.0, 0.0}});
}

MetricGraph half_line() {
  return MetricGraph({"v0"}, {Edge{"tail", 0, no_vertex, EdgeKind::half_line, 0.0, 0.0}});
}

MetricGraph figure_eight(double l1, double l2, double A1, double A2) {
  return MetricGraph({"v0"}, {Edge{"loop1", 0, 0, EdgeKind::finite, l1, A1},
                              Edge{"loop2", 0, 0, EdgeKind::finite, l2, A2}});
}

MetricGraph interval(double length) {
  return MetricGraph({"v0", "v1"}, {Edge{"e0", 0, 1, EdgeKind::finite, length, 0.0}});
}

MetricGraph from_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  const auto name = spec.substr(0, colon);
  std::vector<std::string_view> args;
  if (colon != std::string_view::npos) {
    auto rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      args.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }

  // Accept both positional values and key=value pairs.
  std::map<std::string, double, std::less<>> named;
  std::vector<double> positional;
  for (auto a : args) {
    const auto eq = a.find('=');
    if (eq == std::string_view::npos) {
      positional.push_back(parse_number(a, 0, "generator argument"));
    } else {
      named[std::string(a.substr(0, eq))] = parse_number(a.substr(eq + 1), 0, "generator argument");
    }
  }
  auto get = [&](std::string_view key, std::size_t index, double fallback) {
    if (auto it = named.find(key); it != named.end()) return it->second;
    return index < positional.size() ? positional[index] : fallback;
  };

  if (name == "tadpole") {
    const double L = get("L", 0, 1.0);
    double A = get("A", 1, 0.0);
    if (auto it = named.find("phi"); it != named.end()) {
      // For flux below one half, the loop potential is exactly A^2.
      const double phi = it->second;
      if (phi < 0.0 || std::sqrt(phi) * 2.0 * L > M_PI)
        throw GraphError("phi must lie in [0, pi^2/(2L)^2] for the tadpole generator");
      A = std::sqrt(phi);
    }
    return tadpole(L, A);
  }
  if (name == "line") return line();
  if (name == "halfline") return half_line();
  if (name == "figure-eight") return figure_eight(get("L1", 0, 1.0), get("L2", 1, 1.0), get("A1", 2, 0.0), get("A2", 3, 0.0));
  if (name == "interval") return interval(get("L", 0, 1.0));
  throw GraphError("unknown graph generator '" + std::string(name) + "'");
}

MetricGraph random_graph(std::mt19937_64& rng, std::size_t max_vertices, std::size_t extra_edges,
                         bool with_half_lines) {
  std::uniform_int_distribution<std::size_t> count(1, std::max<std::size_t>(max_vertices, 1));
  std::uniform_real_distribution<double> length(1.0, 3.0), potential(-2.0, 2.0);
  const std::size_t n = count(rng);
  std::vector<std::string> vertices;
  for (std::size_t v = 0; v < n; ++v) vertices.push_back("v" + std::to_string(v));
  std::vector<Edge> edges;
  auto add = [&](std::size_t a, std::size_t b) {
    edges.push_back(Edge{"e" + std::to_string(edges.size()), a, b, EdgeKind::finite, length(rng), potential(rng)});
  };
  for (std::size_t v = 1; v < n; ++v) add(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng), v);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  // A single vertex needs at least one loop to carry an edge.
  const std::size_t least = n == 1 ? 1 : 0;
  const std::size_t extra = std::uniform_int_distribution<std::size_t>(least, std::max(least, extra_edges))(rng);
  for (std::size_t k = 0; k < extra; ++k) add(pick(rng), pick(rng));
  if (with_half_lines) {
    const std::size_t halves = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
    for (std::size_t k = 0; k < halves; ++k)
      edges.push_back(Edge{"h" + std::to_string(k), pick(rng), no_vertex, EdgeKind::half_line, 0.0, potential(rng)});
  }
  return MetricGraph(std::move(vertices), std::move(edges));
}

}  // namespace generators

}  // namespace magnls
