#include "mimosa/vocab.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "mimosa/smiles.hpp"

namespace mimosa {

char bond_symbol(BondType b) {
  switch (b) {
    case BondType::Single: return '-';
    case BondType::Double: return '=';
    case BondType::Triple: return '#';
    case BondType::Aromatic: return ':';
  }
  return '?';
}

namespace {

// Maximum common valence per element. Multi-valent elements carry their
// maximum common valence (S 6, P 5); noble gases and group-1 metals get a
// floor of 1 to satisfy the 1..8 bound.
const std::unordered_map<std::string, int>& valence_table() {
  static const std::unordered_map<std::string, int> table = {
      {"H", 1},  {"He", 1}, {"Li", 1}, {"Be", 2}, {"B", 3},  {"C", 4},
      {"N", 3},  {"O", 2},  {"F", 1},  {"Ne", 1}, {"Na", 1}, {"Mg", 2},
      {"Al", 3}, {"Si", 4}, {"P", 5},  {"S", 6},  {"Cl", 1}, {"Ar", 1},
      {"K", 1},  {"Ca", 2}, {"Sc", 3}, {"Ti", 4}, {"V", 5},  {"Cr", 6},
      {"Mn", 7}, {"Fe", 6}, {"Co", 5}, {"Ni", 4}, {"Cu", 4}, {"Zn", 2},
      {"Ga", 3}, {"Ge", 4}, {"As", 5}, {"Se", 6}, {"Br", 1}, {"Kr", 2},
      {"Rb", 1}, {"Sr", 2}, {"Y", 3},  {"Zr", 4}, {"Nb", 5}, {"Mo", 6},
      {"Tc", 7}, {"Ru", 8}, {"Rh", 6}, {"Pd", 4}, {"Ag", 3}, {"Cd", 2},
      {"In", 3}, {"Sn", 4}, {"Sb", 5}, {"Te", 6}, {"I", 1},  {"Xe", 8},
      {"Cs", 1}, {"Ba", 2}, {"La", 3}, {"Ce", 4}, {"Pr", 4}, {"Nd", 3},
      {"Pm", 3}, {"Sm", 3}, {"Eu", 3}, {"Gd", 3}, {"Tb", 4}, {"Dy", 3},
      {"Ho", 3}, {"Er", 3}, {"Tm", 3}, {"Yb", 3}, {"Lu", 3}, {"Hf", 4},
      {"Ta", 5}, {"W", 6},  {"Re", 7}, {"Os", 8}, {"Ir", 6}, {"Pt", 6},
      {"Au", 5}, {"Hg", 2}, {"Tl", 3}, {"Pb", 4}, {"Bi", 5}, {"Po", 6},
      {"At", 1}, {"Rn", 2}, {"Fr", 1}, {"Ra", 2}, {"Ac", 3}, {"Th", 4},
      {"Pa", 5}, {"U", 6},  {"Np", 7}, {"Pu", 7}, {"Am", 6}, {"Cm", 4},
      {"Bk", 4}, {"Cf", 4}, {"Es", 3}, {"Fm", 3}, {"Md", 3}, {"No", 3},
      {"Lr", 3}, {"Rf", 4}, {"Db", 5}, {"Sg", 6}, {"Bh", 7}, {"Hs", 8},
      {"Mt", 6}, {"Ds", 6}, {"Rg", 5}, {"Cn", 2}, {"Nh", 3}, {"Fl", 4},
      {"Mc", 5}, {"Lv", 6}, {"Ts", 1}, {"Og", 2},
  };
  return table;
}

const char* kDeskVocabText =
    "0\tatom\tC\t4\n"
    "1\tatom\tN\t3\n"
    "2\tatom\tO\t2\n"
    "3\tatom\tS\t6\n"
    "4\tatom\tF\t1\n"
    "5\tatom\tCl\t1\n"
    "6\tatom\tBr\t1\n"
    "7\tring\tc1ccccc1\t6:6\n"
    "8\tring\tC1CCCC1\t5:5\n"
    "9\tring\tC1CCCCC1\t6:6\n";

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

int element_max_valence(const std::string& symbol) {
  auto it = valence_table().find(symbol);
  if (it == valence_table().end())
    throw std::runtime_error("unknown element symbol: " + symbol);
  return it->second;
}

void SubstructureVocab::add_entry(VocabEntry e) {
  if (e.id != static_cast<int>(entries_.size()))
    throw std::runtime_error("vocabulary ids must be dense and ordered, got id " +
                             std::to_string(e.id) + " at position " +
                             std::to_string(entries_.size()));
  if (by_label_.count(e.label))
    throw std::runtime_error("duplicate vocabulary label: " + e.label);
  if (e.kind == VocabEntry::Kind::Atom) {
    if (e.max_valence < 1 || e.max_valence > 8)
      throw std::runtime_error("atom entry " + e.label +
                               ": max_valence must be in 1..8");
  } else {
    if (e.ring_size < 3)
      throw std::runtime_error("ring entry " + e.label + ": ring_size must be >= 3");
    if (e.attachment_capacity < 1 || e.attachment_capacity > e.ring_size)
      throw std::runtime_error("ring entry " + e.label +
                               ": attachment_capacity must be in 1..ring_size");
  }
  by_label_.emplace(e.label, e.id);
  entries_.push_back(std::move(e));
}

void SubstructureVocab::finalize() {
  for (auto& e : entries_) {
    if (!e.is_ring()) continue;
    RingTemplate t = parse_ring_label(e.label);
    if (t.size() != e.ring_size)
      throw std::runtime_error("ring entry " + e.label + ": declared ring_size " +
                               std::to_string(e.ring_size) + " but label has " +
                               std::to_string(t.size()) + " atoms");
    // spare doubled valence per position after internal bonds and any
    // explicit hydrogens
    t.free_doubled.resize(t.size());
    const int n = t.size();
    for (int i = 0; i < n; ++i) {
      int used = doubled_order(t.bonds[(i + n - 1) % n]) + doubled_order(t.bonds[i]);
      if (t.hcount[i] > 0) used += 2 * t.hcount[i];
      int free = 2 * element_max_valence(t.elements[i]) - used;
      t.free_doubled[i] = free > 0 ? free : 0;
    }
    e.ring = std::move(t);
  }
}

SubstructureVocab SubstructureVocab::parse(const std::string& text,
                                           const std::string& origin) {
  SubstructureVocab v;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != 4)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected 4 tab-separated fields");
    VocabEntry e;
    e.id = std::stoi(fields[0]);
    e.label = fields[2];
    if (fields[1] == "atom") {
      e.kind = VocabEntry::Kind::Atom;
      e.max_valence = std::stoi(fields[3]);
    } else if (fields[1] == "ring") {
      e.kind = VocabEntry::Kind::Ring;
      auto colon = fields[3].find(':');
      if (colon == std::string::npos)
        throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                 ": ring field must be ring_size:attachment_capacity");
      e.ring_size = std::stoi(fields[3].substr(0, colon));
      e.attachment_capacity = std::stoi(fields[3].substr(colon + 1));
    } else {
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": kind must be atom or ring");
    }
    v.add_entry(std::move(e));
  }
  if (v.entries_.empty())
    throw std::runtime_error(origin + ": empty vocabulary");
  v.finalize();
  return v;
}

SubstructureVocab SubstructureVocab::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

SubstructureVocab SubstructureVocab::desk_default() {
  return parse(kDeskVocabText, "<desk-default>");
}

SubstructureVocab SubstructureVocab::subset(
    const std::vector<std::string>& labels) const {
  SubstructureVocab v;
  int next = 0;
  for (const auto& lbl : labels) {
    VocabEntry e = entry(require(lbl));
    e.id = next++;
    v.add_entry(std::move(e));
  }
  v.finalize();
  return v;
}

const VocabEntry& SubstructureVocab::entry(int id) const {
  if (id < 0 || id >= size())
    throw std::out_of_range("vocab id out of range: " + std::to_string(id));
  return entries_[id];
}

std::optional<int> SubstructureVocab::find(const std::string& label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

int SubstructureVocab::require(const std::string& label) const {
  auto id = find(label);
  if (!id) throw std::runtime_error("label not in vocabulary: " + label);
  return *id;
}

}  // namespace mimosa
