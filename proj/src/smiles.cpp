#include "mimosa/smiles.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "mimosa/chem_rules.hpp"

namespace mimosa {

namespace {

bool is_organic_subset(const std::string& elem) {
  static const std::set<std::string> organic = {"B", "C",  "N",  "O", "P",
                                                "S", "F",  "Cl", "Br", "I"};
  return organic.count(elem) > 0;
}

bool aromatic_spelling(const std::string& elem) {
  return elem == "B" || elem == "C" || elem == "N" || elem == "O" ||
         elem == "P" || elem == "S";
}

BondType default_bond(const AtomNode& a, const AtomNode& b) {
  return (a.aromatic && b.aromatic) ? BondType::Aromatic : BondType::Single;
}

struct ParsedAtoms {
  AtomGraph graph;
  std::vector<std::size_t> offsets;  // byte offset per atom
};

bool known_element(const std::string& sym) {
  try {
    element_max_valence(sym);
    return true;
  } catch (const std::runtime_error&) {
    return false;
  }
}

ParsedAtoms parse_atoms_impl(const std::string& s) {
  ParsedAtoms out;
  AtomGraph& g = out.graph;

  struct RingOpen {
    int atom;
    int bond;  // -1 = unspecified
    std::size_t offset;
  };
  std::map<char, RingOpen> open_rings;
  std::vector<int> branch_stack;
  int prev = -1;
  int pending_bond = -1;
  std::size_t pending_off = 0;

  auto fail = [&](ParseError::Kind k, std::size_t off, const std::string& msg) {
    throw ParseError(k, off, msg);
  };

  auto add_bond = [&](int u, int v, BondType b, std::size_t off) {
    if (u == v) fail(ParseError::Kind::Lexical, off, "ring closure to same atom");
    for (const Edge& e : g.bonds)
      if ((e.u == u && e.v == v) || (e.u == v && e.v == u))
        fail(ParseError::Kind::Lexical, off, "duplicate bond between atoms");
    g.bonds.push_back({u, v, b});
  };

  auto add_atom = [&](AtomNode atom, std::size_t off) {
    g.atoms.push_back(std::move(atom));
    out.offsets.push_back(off);
    int idx = g.atom_count() - 1;
    if (prev >= 0) {
      BondType b = pending_bond >= 0 ? static_cast<BondType>(pending_bond)
                                     : default_bond(g.atoms[prev], g.atoms[idx]);
      add_bond(prev, idx, b, off);
    }
    pending_bond = -1;
    prev = idx;
  };

  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const char c = s[i];
    const std::size_t off = i;
    if (c == '-' || c == '=' || c == '#' || c == ':') {
      if (pending_bond >= 0)
        fail(ParseError::Kind::Lexical, off, "two bond symbols in a row");
      switch (c) {
        case '-': pending_bond = static_cast<int>(BondType::Single); break;
        case '=': pending_bond = static_cast<int>(BondType::Double); break;
        case '#': pending_bond = static_cast<int>(BondType::Triple); break;
        case ':': pending_bond = static_cast<int>(BondType::Aromatic); break;
      }
      pending_off = off;
      ++i;
    } else if (c == '/' || c == '\\' || c == '@') {
      fail(ParseError::Kind::Lexical, off, "stereochemistry markers unsupported");
    } else if (c == '.') {
      fail(ParseError::Kind::Lexical, off, "disconnected components unsupported");
    } else if (c == '%') {
      fail(ParseError::Kind::Lexical, off, "multi-digit ring closures unsupported");
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      if (prev < 0)
        fail(ParseError::Kind::Lexical, off, "ring closure before any atom");
      auto it = open_rings.find(c);
      if (it == open_rings.end()) {
        open_rings[c] = {prev, pending_bond, off};
        pending_bond = -1;
      } else {
        RingOpen open = it->second;
        open_rings.erase(it);
        int b = -1;
        if (open.bond >= 0 && pending_bond >= 0 && open.bond != pending_bond)
          fail(ParseError::Kind::Lexical, off, "conflicting ring-closure bonds");
        b = open.bond >= 0 ? open.bond : pending_bond;
        BondType bt = b >= 0 ? static_cast<BondType>(b)
                             : default_bond(g.atoms[open.atom], g.atoms[prev]);
        add_bond(open.atom, prev, bt, off);
        pending_bond = -1;
      }
      ++i;
    } else if (c == '(') {
      if (prev < 0)
        fail(ParseError::Kind::Lexical, off, "branch before any atom");
      if (pending_bond >= 0)
        fail(ParseError::Kind::Lexical, pending_off, "bond before branch open");
      branch_stack.push_back(prev);
      ++i;
    } else if (c == ')') {
      if (branch_stack.empty())
        fail(ParseError::Kind::UnbalancedBranch, off, "unmatched branch close");
      if (pending_bond >= 0)
        fail(ParseError::Kind::Lexical, pending_off, "dangling bond before branch close");
      prev = branch_stack.back();
      branch_stack.pop_back();
      ++i;
    } else if (c == '[') {
      ++i;
      if (i < n && std::isdigit(static_cast<unsigned char>(s[i])))
        fail(ParseError::Kind::Lexical, i, "isotopes unsupported");
      AtomNode atom;
      atom.hcount = 0;  // bracket atoms are explicit about hydrogens
      // element symbol, possibly aromatic lowercase
      if (i < n && std::islower(static_cast<unsigned char>(s[i]))) {
        std::string two = s.substr(i, 2);
        if (two == "se" || two == "as") {
          atom.element = two == "se" ? "Se" : "As";
          atom.aromatic = true;
          i += 2;
        } else if (std::string("bcnops").find(s[i]) != std::string::npos) {
          atom.element = std::string(1, static_cast<char>(std::toupper(s[i])));
          atom.aromatic = true;
          ++i;
        } else {
          fail(ParseError::Kind::Lexical, i, "unknown aromatic element in brackets");
        }
      } else if (i < n && std::isupper(static_cast<unsigned char>(s[i]))) {
        std::string sym(1, s[i]);
        if (i + 1 < n && std::islower(static_cast<unsigned char>(s[i + 1])) &&
            known_element(sym + s[i + 1]) && s[i + 1] != 'h') {
          sym += s[i + 1];
          i += 2;
        } else {
          ++i;
        }
        if (!known_element(sym))
          fail(ParseError::Kind::Lexical, off + 1, "unknown element: " + sym);
        atom.element = sym;
      } else {
        fail(ParseError::Kind::Lexical, i, "expected element symbol in brackets");
      }
      if (i < n && s[i] == '@')
        fail(ParseError::Kind::Lexical, i, "stereochemistry markers unsupported");
      if (i < n && s[i] == 'H') {
        ++i;
        int h = 1;
        if (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) {
          h = s[i] - '0';
          ++i;
        }
        atom.hcount = h;
      }
      if (i < n && (s[i] == '+' || s[i] == '-')) {
        const char sign = s[i];
        int count = 0;
        while (i < n && s[i] == sign) {
          ++count;
          ++i;
        }
        if (count == 1 && i < n && std::isdigit(static_cast<unsigned char>(s[i]))) {
          count = s[i] - '0';
          ++i;
        }
        atom.charge = sign == '+' ? count : -count;
      }
      if (i >= n || s[i] != ']')
        fail(ParseError::Kind::Lexical, i, "expected ] to close bracket atom");
      ++i;
      add_atom(std::move(atom), off);
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::string sym(1, c);
      if (i + 1 < n && std::islower(static_cast<unsigned char>(s[i + 1])) &&
          is_organic_subset(sym + s[i + 1])) {
        sym += s[i + 1];
        i += 2;
      } else {
        ++i;
      }
      if (!is_organic_subset(sym))
        fail(ParseError::Kind::Lexical, off,
             "atom must be bracketed: " + sym);
      AtomNode atom;
      atom.element = sym;
      add_atom(std::move(atom), off);
    } else if (std::islower(static_cast<unsigned char>(c))) {
      if (std::string("bcnops").find(c) == std::string::npos)
        fail(ParseError::Kind::Lexical, off, "unknown aromatic atom");
      AtomNode atom;
      atom.element = std::string(1, static_cast<char>(std::toupper(c)));
      atom.aromatic = true;
      add_atom(std::move(atom), off);
      ++i;
    } else {
      fail(ParseError::Kind::Lexical, off, "unexpected character");
    }
  }

  if (pending_bond >= 0)
    throw ParseError(ParseError::Kind::Lexical, pending_off, "dangling bond at end");
  if (!open_rings.empty())
    throw ParseError(ParseError::Kind::UnbalancedRing, open_rings.begin()->second.offset,
                     "unclosed ring bond digit");
  if (!branch_stack.empty())
    throw ParseError(ParseError::Kind::UnbalancedBranch, n, "unclosed branch");
  if (g.atoms.empty())
    throw ParseError(ParseError::Kind::Lexical, 0, "no atoms in input");
  return out;
}

}  // namespace

AtomGraph parse_smiles_atoms(const std::string& s) {
  return parse_atoms_impl(s).graph;
}

// --- ring perception -----------------------------------------------------

namespace {

int component_count(const AtomGraph& a) {
  const int n = a.atom_count();
  auto adj = a.adjacency();
  std::vector<char> seen(n, 0);
  int comps = 0;
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++comps;
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const auto& [u, b] : adj[v])
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
    }
  }
  return comps;
}

std::vector<std::uint64_t> edge_bitset(const std::vector<int>& cycle,
                                       const std::map<std::pair<int, int>, int>& edge_idx,
                                       std::size_t words) {
  std::vector<std::uint64_t> bits(words, 0);
  const int len = static_cast<int>(cycle.size());
  for (int k = 0; k < len; ++k) {
    int u = cycle[k], v = cycle[(k + 1) % len];
    if (u > v) std::swap(u, v);
    int idx = edge_idx.at({u, v});
    bits[idx / 64] |= (1ULL << (idx % 64));
  }
  return bits;
}

}  // namespace

RingPerception perceive_rings(const AtomGraph& a) {
  RingPerception out;
  const int n = a.atom_count();
  const int m = static_cast<int>(a.bonds.size());
  if (n == 0 || m == 0) return out;
  auto adj = a.adjacency();
  std::map<std::pair<int, int>, int> edge_idx;
  for (int e = 0; e < m; ++e) {
    int u = a.bonds[e].u, v = a.bonds[e].v;
    if (u > v) std::swap(u, v);
    edge_idx[{u, v}] = e;
  }
  const int rank_target = m - n + component_count(a);
  if (rank_target <= 0) return out;

  // shortest cycle through each edge: BFS between its endpoints with the
  // edge removed
  std::vector<std::vector<int>> candidates;
  for (const Edge& e : a.bonds) {
    std::vector<int> parent(n, -2);
    std::queue<int> q;
    q.push(e.u);
    parent[e.u] = -1;
    while (!q.empty() && parent[e.v] == -2) {
      int v = q.front();
      q.pop();
      for (const auto& [u, b] : adj[v]) {
        if ((v == e.u && u == e.v) || (v == e.v && u == e.u)) continue;
        if (parent[u] != -2) continue;
        parent[u] = v;
        q.push(u);
      }
    }
    if (parent[e.v] == -2) continue;
    std::vector<int> path;
    for (int v = e.v; v != -1; v = parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());  // e.u ... e.v; closing edge implicit
    candidates.push_back(std::move(path));
  }

  // dedup by edge set and order by (length, edge set) for determinism
  const std::size_t words = (m + 63) / 64;
  std::vector<std::pair<std::vector<std::uint64_t>, std::vector<int>>> uniq;
  {
    std::set<std::vector<std::uint64_t>> seen;
    for (auto& c : candidates) {
      auto bits = edge_bitset(c, edge_idx, words);
      if (seen.insert(bits).second) uniq.emplace_back(std::move(bits), std::move(c));
    }
  }
  std::sort(uniq.begin(), uniq.end(),
            [](const auto& x, const auto& y) {
              if (x.second.size() != y.second.size())
                return x.second.size() < y.second.size();
              return x.first < y.first;
            });

  // greedy GF(2) independence
  std::vector<std::vector<std::uint64_t>> basis;
  for (auto& [bits, cycle] : uniq) {
    if (static_cast<int>(out.cycles.size()) >= rank_target) break;
    std::vector<std::uint64_t> r = bits;
    for (const auto& b : basis) {
      // find leading bit of b
      int lead = -1;
      for (int w = static_cast<int>(words) - 1; w >= 0 && lead < 0; --w)
        if (b[w]) lead = w * 64 + 63 - __builtin_clzll(b[w]);
      if (lead >= 0 && (r[lead / 64] >> (lead % 64)) & 1ULL)
        for (std::size_t w = 0; w < words; ++w) r[w] ^= b[w];
    }
    bool zero = true;
    for (auto w : r)
      if (w) zero = false;
    if (zero) continue;
    basis.push_back(std::move(r));
    out.cycles.push_back(cycle);
  }

  out.isolated.assign(out.cycles.size(), true);
  for (std::size_t i = 0; i < out.cycles.size(); ++i) {
    std::set<int> ai(out.cycles[i].begin(), out.cycles[i].end());
    for (std::size_t j = 0; j < out.cycles.size(); ++j) {
      if (i == j) continue;
      for (int v : out.cycles[j])
        if (ai.count(v)) {
          out.isolated[i] = false;
          break;
        }
      if (!out.isolated[i]) break;
    }
  }
  return out;
}

// --- ring signatures and collapse -----------------------------------------

namespace {

std::string ring_signature(const std::vector<std::string>& elements,
                           const std::vector<bool>& aromatic,
                           const std::vector<BondType>& bonds) {
  const int n = static_cast<int>(elements.size());
  std::string best;
  for (int dir = 0; dir < 2; ++dir) {
    for (int r = 0; r < n; ++r) {
      std::string s;
      for (int k = 0; k < n; ++k) {
        int idx = dir == 0 ? (r + k) % n : (r - k % n + n) % n;
        int bidx = dir == 0 ? (r + k) % n : (r - k % n - 1 + 2 * n) % n;
        s += elements[idx];
        s += aromatic[idx] ? '~' : '.';
        s += static_cast<char>('0' + static_cast<int>(bonds[bidx]));
      }
      if (best.empty() || s < best) best = s;
    }
  }
  return best;
}

std::string template_signature(const RingTemplate& t) {
  return ring_signature(t.elements, t.aromatic, t.bonds);
}

std::string cycle_signature(const AtomGraph& a, const std::vector<int>& cycle) {
  const int n = static_cast<int>(cycle.size());
  auto adj = a.adjacency();
  auto bond_between = [&](int u, int v) {
    for (const auto& [w, b] : adj[u])
      if (w == v) return b;
    throw std::logic_error("cycle edge missing");
  };
  std::vector<std::string> elements;
  std::vector<bool> aromatic;
  std::vector<BondType> bonds;
  for (int k = 0; k < n; ++k) {
    elements.push_back(a.atoms[cycle[k]].element);
    aromatic.push_back(a.atoms[cycle[k]].aromatic);
    bonds.push_back(bond_between(cycle[k], cycle[(k + 1) % n]));
  }
  return ring_signature(elements, aromatic, bonds);
}

struct CollapseResult {
  MolGraph graph;
  std::vector<int> rep_atom;  // representative atom per mol node
};

CollapseResult collapse_impl(const AtomGraph& a, const SubstructureVocab& vocab,
                             const std::vector<std::size_t>* offsets) {
  auto ring_info = perceive_rings(a);

  std::map<std::string, int> sig_to_entry;
  for (const auto& e : vocab.entries())
    if (e.is_ring() && e.ring) sig_to_entry.emplace(template_signature(*e.ring), e.id);

  const int n = a.atom_count();
  std::vector<int> cycle_of_atom(n, -1);  // collapsed cycle index per atom
  std::vector<int> cycle_entry(ring_info.cycles.size(), -1);
  for (std::size_t ci = 0; ci < ring_info.cycles.size(); ++ci) {
    if (!ring_info.isolated[ci]) continue;
    auto it = sig_to_entry.find(cycle_signature(a, ring_info.cycles[ci]));
    if (it == sig_to_entry.end()) continue;
    cycle_entry[ci] = it->second;
    for (int v : ring_info.cycles[ci]) cycle_of_atom[v] = static_cast<int>(ci);
  }

  auto offset_of = [&](int atom) -> std::size_t {
    return offsets ? (*offsets)[atom] : 0;
  };

  std::vector<int> node_of_atom(n, -1);
  std::vector<int> labels;
  std::vector<int> reps;
  std::vector<int> node_of_cycle(ring_info.cycles.size(), -1);
  for (int v = 0; v < n; ++v) {
    int ci = cycle_of_atom[v];
    if (ci >= 0) {
      if (node_of_cycle[ci] < 0) {
        node_of_cycle[ci] = static_cast<int>(labels.size());
        labels.push_back(cycle_entry[ci]);
        reps.push_back(v);
      }
      node_of_atom[v] = node_of_cycle[ci];
    } else {
      auto id = vocab.find(a.atoms[v].element);
      if (!id)
        throw ParseError(ParseError::Kind::UnknownSubstructure, offset_of(v),
                         "substructure not in vocabulary: " + a.atoms[v].element);
      node_of_atom[v] = static_cast<int>(labels.size());
      labels.push_back(*id);
      reps.push_back(v);
    }
  }

  std::vector<Edge> edges;
  for (const Edge& e : a.bonds) {
    int mu = node_of_atom[e.u], mv = node_of_atom[e.v];
    if (mu == mv) continue;  // internal ring bond
    edges.push_back({mu, mv, e.bond});
  }
  return {MolGraph(std::move(labels), std::move(edges)), std::move(reps)};
}

}  // namespace

MolGraph collapse_to_substructures(const AtomGraph& a,
                                   const SubstructureVocab& vocab,
                                   std::size_t /*error_offset*/) {
  return collapse_impl(a, vocab, nullptr).graph;
}

MolGraph parse_smiles(const std::string& s, const SubstructureVocab& vocab) {
  ParsedAtoms parsed = parse_atoms_impl(s);
  CollapseResult collapsed = collapse_impl(parsed.graph, vocab, &parsed.offsets);
  ValidityReport report = check_validity(collapsed.graph, vocab);
  if (!report.valid) {
    const auto& [node, reason] = report.violations.front();
    std::size_t off = 0;
    if (node >= 0 && node < static_cast<int>(collapsed.rep_atom.size()))
      off = parsed.offsets[collapsed.rep_atom[node]];
    throw ParseError(ParseError::Kind::ValenceViolation, off, reason);
  }
  return collapsed.graph;
}

// --- expansion -------------------------------------------------------------

AtomGraph expand_to_atoms(const MolGraph& g, const SubstructureVocab& vocab) {
  AtomGraph a;
  const int n = g.node_count();
  // atom index of plain nodes; per-ring-node position -> atom index
  std::vector<int> plain_atom(n, -1);
  std::vector<std::vector<int>> ring_atoms(n);
  for (int v = 0; v < n; ++v) {
    const VocabEntry& e = vocab.entry(g.label(v));
    if (!e.is_ring()) {
      AtomNode atom;
      atom.element = e.label;
      plain_atom[v] = a.atom_count();
      a.atoms.push_back(std::move(atom));
    } else {
      const RingTemplate& t = *e.ring;
      int base = a.atom_count();
      for (int p = 0; p < t.size(); ++p) {
        AtomNode atom;
        atom.element = t.elements[p];
        atom.aromatic = t.aromatic[p];
        atom.hcount = t.hcount[p];
        ring_atoms[v].push_back(base + p);
        a.atoms.push_back(std::move(atom));
      }
      for (int p = 0; p < t.size(); ++p)
        a.bonds.push_back({base + p, base + (p + 1) % t.size(), t.bonds[p]});
    }
  }

  // assign each ring node's external edges to template positions
  std::vector<std::map<int, int>> attach_atom(n);  // peer node -> atom index
  for (int v = 0; v < n; ++v) {
    const VocabEntry& e = vocab.entry(g.label(v));
    if (!e.is_ring()) continue;
    const RingTemplate& t = *e.ring;
    std::vector<char> used(t.size(), 0);
    for (const auto& [peer, bond] : g.neighbors(v)) {
      int pos = -1;
      for (int p = 0; p < t.size(); ++p) {
        if (used[p]) continue;
        if (t.free_doubled[p] < doubled_order(bond)) continue;
        if (bond == BondType::Aromatic && !t.aromatic[p]) continue;
        pos = p;
        break;
      }
      if (pos < 0)
        throw std::runtime_error(
            "cannot place ring attachment while expanding " + e.label);
      used[pos] = 1;
      attach_atom[v][peer] = ring_atoms[v][pos];
    }
  }

  for (const Edge& e : g.edges()) {
    int au = plain_atom[e.u] >= 0 ? plain_atom[e.u] : attach_atom[e.u].at(e.v);
    int av = plain_atom[e.v] >= 0 ? plain_atom[e.v] : attach_atom[e.v].at(e.u);
    a.bonds.push_back({au, av, e.bond});
  }
  return a;
}

// --- writer ---------------------------------------------------------------

namespace {

std::string atom_token(const AtomNode& atom) {
  const bool organics = is_organic_subset(atom.element);
  const bool can_lowercase = atom.aromatic && aromatic_spelling(atom.element);
  std::string spelled = atom.element;
  if (atom.aromatic) {
    if (can_lowercase) {
      spelled[0] = static_cast<char>(std::tolower(spelled[0]));
    } else if (atom.element == "Se" || atom.element == "As") {
      spelled[0] = static_cast<char>(std::tolower(spelled[0]));
    } else {
      throw std::runtime_error("no aromatic SMILES spelling for element " +
                               atom.element);
    }
  }
  const bool needs_bracket = !organics || atom.charge != 0 || atom.hcount > 0 ||
                             (atom.aromatic && !can_lowercase);
  if (!needs_bracket) return spelled;
  std::string s = "[" + spelled;
  if (atom.hcount > 0) {
    s += 'H';
    if (atom.hcount > 1) s += std::to_string(atom.hcount);
  }
  if (atom.charge != 0) {
    s += atom.charge > 0 ? '+' : '-';
    if (std::abs(atom.charge) > 1) s += std::to_string(std::abs(atom.charge));
  }
  s += ']';
  return s;
}

struct Writer {
  const AtomGraph& a;
  std::vector<std::vector<std::pair<int, BondType>>> adj;
  std::vector<int> preorder;
  std::vector<int> parent;
  // per atom: list of (digit, peer, bond, opening?)
  std::vector<std::vector<std::tuple<int, int, BondType, bool>>> closures;
  std::string out;

  explicit Writer(const AtomGraph& graph) : a(graph), adj(graph.adjacency()) {}

  void build() {
    const int n = a.atom_count();
    preorder.assign(n, -1);
    parent.assign(n, -1);
    closures.assign(n, {});
    std::vector<std::pair<int, int>> back_edges;  // (opened-at, closed-at)
    std::vector<BondType> back_bonds;
    int counter = 0;
    // iterative DFS with deterministic neighbor order
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    preorder[0] = counter++;
    std::set<std::pair<int, int>> tree_edges;
    while (!stack.empty()) {
      auto& [v, k] = stack.back();
      if (k >= adj[v].size()) {
        stack.pop_back();
        continue;
      }
      auto [u, b] = adj[v][k++];
      if (preorder[u] < 0) {
        parent[u] = v;
        preorder[u] = counter++;
        tree_edges.insert({std::min(u, v), std::max(u, v)});
        stack.emplace_back(u, 0);
      } else if (u != parent[v] && preorder[u] < preorder[v] &&
                 !tree_edges.count({std::min(u, v), std::max(u, v)})) {
        // back edge, recorded once (from the later endpoint)
        back_edges.emplace_back(u, v);
        back_bonds.push_back(b);
      }
    }
    if (back_edges.size() > 9)
      throw std::runtime_error("too many ring closures for single-digit SMILES");
    for (std::size_t i = 0; i < back_edges.size(); ++i) {
      int digit = static_cast<int>(i) + 1;
      auto [open_at, close_at] = back_edges[i];
      closures[open_at].emplace_back(digit, close_at, back_bonds[i], true);
      closures[close_at].emplace_back(digit, open_at, back_bonds[i], false);
    }
  }

  void emit_bond_if_needed(int u, int v, BondType b) {
    if (b != default_bond(a.atoms[u], a.atoms[v])) out += bond_symbol(b);
  }

  void emit(int v) {
    out += atom_token(a.atoms[v]);
    for (const auto& [digit, peer, bond, opening] : closures[v]) {
      if (!opening) emit_bond_if_needed(v, peer, bond);
      out += static_cast<char>('0' + digit);
    }
    std::vector<std::pair<int, BondType>> children;
    for (const auto& [u, b] : adj[v])
      if (parent[u] == v) children.emplace_back(u, b);
    for (std::size_t i = 0; i < children.size(); ++i) {
      auto [u, b] = children[i];
      const bool last = i + 1 == children.size();
      if (!last) out += '(';
      emit_bond_if_needed(v, u, b);
      emit(u);
      if (!last) out += ')';
    }
  }
};

}  // namespace

std::string write_smiles_atoms(const AtomGraph& a) {
  if (a.atom_count() == 0) throw std::runtime_error("cannot write empty molecule");
  Writer w(a);
  w.build();
  w.emit(0);
  return w.out;
}

std::string write_smiles(const MolGraph& g, const SubstructureVocab& vocab) {
  return write_smiles_atoms(expand_to_atoms(g, vocab));
}

// --- ring template parsing --------------------------------------------------

RingTemplate parse_ring_label(const std::string& label) {
  AtomGraph a = parse_smiles_atoms(label);
  const int n = a.atom_count();
  auto adj = a.adjacency();
  if (n < 3 || static_cast<int>(a.bonds.size()) != n)
    throw std::runtime_error("ring label is not a single cycle: " + label);
  for (int v = 0; v < n; ++v)
    if (adj[v].size() != 2)
      throw std::runtime_error("ring label is not a single cycle: " + label);
  RingTemplate t;
  int prev = -1, cur = 0;
  for (int k = 0; k < n; ++k) {
    t.elements.push_back(a.atoms[cur].element);
    t.aromatic.push_back(a.atoms[cur].aromatic);
    t.hcount.push_back(a.atoms[cur].hcount);
    auto [n0, b0] = adj[cur][0];
    auto [n1, b1] = adj[cur][1];
    int next = n0 == prev ? n1 : n0;
    BondType bond = n0 == prev ? b1 : b0;
    t.bonds.push_back(bond);
    prev = cur;
    cur = next;
  }
  if (cur != 0)
    throw std::runtime_error("ring label walk did not close: " + label);
  return t;
}

std::vector<CorpusRecord> read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  std::vector<CorpusRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    CorpusRecord rec;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      rec.smiles = line;
    } else {
      rec.smiles = line.substr(0, tab);
      rec.name = line.substr(tab + 1);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace mimosa
