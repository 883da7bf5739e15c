#include "mimosa/molgraph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mimosa/rng.hpp"

namespace mimosa {

MolGraph::MolGraph(std::vector<int> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)) {
  const int n = node_count();
  edges_.reserve(edges.size());
  for (Edge e : edges) {
    if (e.u == e.v) throw std::invalid_argument("MolGraph: self-loop");
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw std::invalid_argument("MolGraph: edge endpoint out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
    edges_.push_back(e);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges_.size(); ++i)
    if (edges_[i - 1].u == edges_[i].u && edges_[i - 1].v == edges_[i].v)
      throw std::invalid_argument("MolGraph: parallel edge");
  for (int lbl : nodes_)
    if (lbl < 0) throw std::invalid_argument("MolGraph: negative vocab id");
  adj_.assign(n, {});
  for (const Edge& e : edges_) {
    adj_[e.u].emplace_back(e.v, e.bond);
    adj_[e.v].emplace_back(e.u, e.bond);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

bool MolGraph::has_edge(int u, int v) const {
  for (const auto& [w, b] : adj_.at(u))
    if (w == v) return true;
  return false;
}

BondType MolGraph::edge_bond(int u, int v) const {
  for (const auto& [w, b] : adj_.at(u))
    if (w == v) return b;
  throw std::invalid_argument("MolGraph: no such edge");
}

bool MolGraph::connected() const {
  const int n = node_count();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const auto& [u, b] : adj_[v])
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
  }
  return count == n;
}

int MolGraph::doubled_order_at(int v) const {
  int total = 0;
  for (const auto& [u, b] : adj_.at(v)) total += doubled_order(b);
  return total;
}

std::vector<std::vector<std::pair<int, BondType>>> AtomGraph::adjacency() const {
  std::vector<std::vector<std::pair<int, BondType>>> adj(atoms.size());
  for (const Edge& e : bonds) {
    adj.at(e.u).emplace_back(e.v, e.bond);
    adj.at(e.v).emplace_back(e.u, e.bond);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  return adj;
}

std::vector<int> leaf_nodes(const MolGraph& g) {
  std::vector<int> out;
  for (int v = 0; v < g.node_count(); ++v)
    if (g.degree(v) == 1) out.push_back(v);
  return out;
}

// --- isomorphism -------------------------------------------------------

namespace {

bool multiset_signature_mismatch(const MolGraph& a, const MolGraph& b) {
  auto sig = [](const MolGraph& g) {
    std::vector<std::pair<int, int>> ld;
    for (int v = 0; v < g.node_count(); ++v) ld.emplace_back(g.label(v), g.degree(v));
    std::sort(ld.begin(), ld.end());
    std::vector<int> bonds;
    for (const Edge& e : g.edges()) bonds.push_back(static_cast<int>(e.bond));
    std::sort(bonds.begin(), bonds.end());
    return std::make_pair(ld, bonds);
  };
  return sig(a) != sig(b);
}

bool extend_mapping(const MolGraph& a, const MolGraph& b,
                    const std::vector<int>& order, std::size_t k,
                    std::vector<int>& map_ab, std::vector<char>& used) {
  if (k == order.size()) return true;
  const int v = order[k];
  for (int w = 0; w < b.node_count(); ++w) {
    if (used[w]) continue;
    if (b.label(w) != a.label(v) || b.degree(w) != a.degree(v)) continue;
    bool ok = true;
    for (const auto& [u, bond] : a.neighbors(v)) {
      if (map_ab[u] < 0) continue;
      if (!b.has_edge(w, map_ab[u]) || b.edge_bond(w, map_ab[u]) != bond) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    map_ab[v] = w;
    used[w] = 1;
    if (extend_mapping(a, b, order, k + 1, map_ab, used)) return true;
    map_ab[v] = -1;
    used[w] = 0;
  }
  return false;
}

}  // namespace

bool graph_isomorphic(const MolGraph& a, const MolGraph& b) {
  if (a.node_count() != b.node_count()) return false;
  if (a.edges().size() != b.edges().size()) return false;
  if (multiset_signature_mismatch(a, b)) return false;
  const int n = a.node_count();
  if (n == 0) return true;

  // order: prefer nodes adjacent to already ordered ones (partial mappings
  // fail fast), then most-constrained first
  std::vector<int> order;
  std::vector<char> placed(n, 0);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    auto score = [&](int v) {
      bool adj = false;
      for (const auto& [u, bond] : a.neighbors(v))
        if (placed[u]) adj = true;
      return std::make_tuple(adj ? 0 : 1, -a.degree(v), v);
    };
    for (int v = 0; v < n; ++v) {
      if (placed[v]) continue;
      if (best < 0 || score(v) < score(best)) best = v;
    }
    placed[best] = 1;
    order.push_back(best);
  }

  std::vector<int> map_ab(n, -1);
  std::vector<char> used(n, 0);
  return extend_mapping(a, b, order, 0, map_ab, used);
}

// --- canonical labeling -------------------------------------------------

namespace {

// partition refinement by (color, sorted neighbor (bond,color) multiset)
std::vector<int> refine_colors(const MolGraph& g, std::vector<int> colors) {
  const int n = g.node_count();
  for (;;) {
    std::vector<std::pair<std::vector<long long>, int>> sigs;
    sigs.reserve(n);
    for (int v = 0; v < n; ++v) {
      std::vector<long long> s{colors[v]};
      std::vector<long long> nb;
      for (const auto& [u, b] : g.neighbors(v))
        nb.push_back(static_cast<long long>(colors[u]) * kBondTypeCount +
                     static_cast<int>(b));
      std::sort(nb.begin(), nb.end());
      s.insert(s.end(), nb.begin(), nb.end());
      sigs.emplace_back(std::move(s), v);
    }
    auto sorted = sigs;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> next(n);
    int c = -1;
    const std::vector<long long>* prev = nullptr;
    for (const auto& [s, v] : sorted) {
      if (!prev || s != *prev) {
        ++c;
        prev = &s;
      }
      next[v] = c;
    }
    if (next == colors) return colors;
    colors = std::move(next);
  }
}

std::vector<int> initial_colors(const MolGraph& g) {
  std::vector<int> labels(g.labels());
  std::vector<int> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> colors(g.node_count());
  for (int v = 0; v < g.node_count(); ++v)
    colors[v] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), labels[v]) - sorted.begin());
  return colors;
}

std::string emit_code(const MolGraph& g, const std::vector<int>& colors) {
  const int n = g.node_count();
  std::vector<int> perm(n);  // perm[rank] = node
  for (int v = 0; v < n; ++v) perm[colors[v]] = v;
  std::vector<int> rank(n);
  for (int r = 0; r < n; ++r) rank[perm[r]] = r;
  std::ostringstream out;
  out << n << ';';
  for (int r = 0; r < n; ++r) {
    if (r) out << ',';
    out << g.label(perm[r]);
  }
  out << ';';
  std::vector<std::tuple<int, int, int>> edges;
  for (const Edge& e : g.edges()) {
    int a = rank[e.u], b = rank[e.v];
    if (a > b) std::swap(a, b);
    edges.emplace_back(a, b, static_cast<int>(e.bond));
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) out << ',';
    out << std::get<0>(edges[i]) << '-' << std::get<1>(edges[i]) << ':'
        << std::get<2>(edges[i]);
  }
  return out.str();
}

void canon_search(const MolGraph& g, std::vector<int> colors, std::string& best,
                  bool& have_best) {
  colors = refine_colors(g, std::move(colors));
  const int n = g.node_count();
  std::vector<int> class_size(n, 0);
  for (int c : colors) ++class_size[c];
  int target = -1;
  for (int c = 0; c < n; ++c)
    if (class_size[c] > 1) {
      target = c;
      break;
    }
  if (target < 0) {
    std::string code = emit_code(g, colors);
    if (!have_best || code < best) {
      best = std::move(code);
      have_best = true;
    }
    return;
  }
  for (int v = 0; v < n; ++v) {
    if (colors[v] != target) continue;
    std::vector<int> next(colors);
    for (int& c : next) ++c;
    next[v] = 0;
    canon_search(g, std::move(next), best, have_best);
  }
}

}  // namespace

std::string canonical_key(const MolGraph& g, int cap) {
  if (g.node_count() > cap)
    throw std::invalid_argument("canonical_key: node count " +
                                std::to_string(g.node_count()) +
                                " exceeds exact-canonicalization cap " +
                                std::to_string(cap));
  if (g.node_count() == 0) return "0;;";
  std::string best;
  bool have = false;
  canon_search(g, initial_colors(g), best, have);
  return best;
}

std::string ordering_key(const MolGraph& g, int cap) {
  if (g.node_count() <= cap) return canonical_key(g, cap);
  auto colors = refine_colors(g, initial_colors(g));
  std::vector<std::string> parts;
  for (int v = 0; v < g.node_count(); ++v)
    parts.push_back(std::to_string(g.label(v)) + ":" + std::to_string(colors[v]));
  std::sort(parts.begin(), parts.end());
  std::vector<std::tuple<int, int, int>> ce;
  for (const Edge& e : g.edges()) {
    int a = colors[e.u], b = colors[e.v];
    if (a > b) std::swap(a, b);
    ce.emplace_back(a, b, static_cast<int>(e.bond));
  }
  std::sort(ce.begin(), ce.end());
  std::ostringstream buf;
  for (const auto& p : parts) buf << p << '|';
  for (const auto& [a, b, t] : ce) buf << a << '-' << b << ':' << t << '|';
  std::ostringstream out;
  out << "wl:" << g.node_count() << ':' << g.edges().size() << ':' << std::hex
      << fnv1a64(buf.str());
  return out.str();
}

// --- edit helpers -------------------------------------------------------

MolGraph with_edge_bond(const MolGraph& g, int u, int v, BondType b) {
  std::vector<Edge> edges;
  bool found = false;
  for (Edge e : g.edges()) {
    if ((e.u == std::min(u, v)) && (e.v == std::max(u, v))) {
      e.bond = b;
      found = true;
    }
    edges.push_back(e);
  }
  if (!found) edges.push_back({u, v, b});
  return MolGraph(g.labels(), std::move(edges));
}

MolGraph with_added_leaf(const MolGraph& g, int anchor, int label, BondType b) {
  std::vector<int> nodes(g.labels());
  nodes.push_back(label);
  std::vector<Edge> edges(g.edges());
  edges.push_back({anchor, g.node_count(), b});
  return MolGraph(std::move(nodes), std::move(edges));
}

MolGraph with_removed_node(const MolGraph& g, int v) {
  std::vector<int> nodes;
  std::vector<int> remap(g.node_count(), -1);
  for (int i = 0; i < g.node_count(); ++i) {
    if (i == v) continue;
    remap[i] = static_cast<int>(nodes.size());
    nodes.push_back(g.label(i));
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (e.u == v || e.v == v) continue;
    edges.push_back({remap[e.u], remap[e.v], e.bond});
  }
  return MolGraph(std::move(nodes), std::move(edges));
}

MolGraph with_relabeled_node(const MolGraph& g, int v, int label) {
  std::vector<int> nodes(g.labels());
  nodes.at(v) = label;
  return MolGraph(std::move(nodes), g.edges());
}

MolGraph with_permuted_nodes(const MolGraph& g, const std::vector<int>& perm) {
  const int n = g.node_count();
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("with_permuted_nodes: bad permutation size");
  std::vector<int> inv(n, -1);
  for (int i = 0; i < n; ++i) inv.at(perm[i]) = i;
  std::vector<int> nodes(n);
  for (int i = 0; i < n; ++i) nodes[i] = g.label(perm[i]);
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    edges.push_back({inv[e.u], inv[e.v], e.bond});
  return MolGraph(std::move(nodes), std::move(edges));
}

}  // namespace mimosa
