#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace mimosa {

// The four chemical bond types (C2 = 4).
enum class BondType : int { Single = 0, Double = 1, Triple = 2, Aromatic = 3 };

inline constexpr int kBondTypeCount = 4;

// Bond order doubled so aromatic (1.5) stays integral.
inline int doubled_order(BondType b) {
  switch (b) {
    case BondType::Single: return 2;
    case BondType::Double: return 4;
    case BondType::Triple: return 6;
    case BondType::Aromatic: return 3;
  }
  return 0;
}

inline double bond_order(BondType b) { return doubled_order(b) / 2.0; }

char bond_symbol(BondType b);

// Maximum common valence for an element symbol ("C" -> 4, "S" -> 6, ...).
// Covers all 118 elements; multi-valent elements use their maximum common
// valence per the validity model.
int element_max_valence(const std::string& symbol);

// Atom cycle described by a ring entry's SMILES label, in ring order.
// bonds[i] joins position i and (i+1) % size.
struct RingTemplate {
  std::vector<std::string> elements;
  std::vector<bool> aromatic;
  std::vector<int> hcount;  // -1 = implicit
  std::vector<BondType> bonds;
  std::vector<int> free_doubled;  // spare doubled valence per position

  int size() const { return static_cast<int>(elements.size()); }
};

struct VocabEntry {
  enum class Kind { Atom, Ring };

  int id = -1;
  Kind kind = Kind::Atom;
  std::string label;
  int max_valence = 0;          // atoms
  int ring_size = 0;            // rings
  int attachment_capacity = 0;  // rings
  std::optional<RingTemplate> ring;

  bool is_ring() const { return kind == Kind::Ring; }
};

// Catalog of substructure node types (atoms + single rings); houses C1.
class SubstructureVocab {
 public:
  SubstructureVocab() = default;

  static SubstructureVocab load_file(const std::string& path);
  static SubstructureVocab parse(const std::string& text,
                                 const std::string& origin = "<memory>");
  // 10-entry default: C N O S F Cl Br + benzene, cyclopentane, cyclohexane.
  static SubstructureVocab desk_default();
  // Entries restricted to the given labels, re-indexed densely.
  SubstructureVocab subset(const std::vector<std::string>& labels) const;

  int size() const { return static_cast<int>(entries_.size()); }
  const VocabEntry& entry(int id) const;
  const std::vector<VocabEntry>& entries() const { return entries_; }
  std::optional<int> find(const std::string& label) const;
  int require(const std::string& label) const;  // throws if absent

 private:
  void add_entry(VocabEntry e);
  void finalize();

  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, int> by_label_;
};

}  // namespace mimosa
