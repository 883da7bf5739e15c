#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "mimosa/molgraph.hpp"
#include "mimosa/vocab.hpp"

namespace mimosa {

// Positioned parse failure; `offset` is the byte offset into the input.
class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    Lexical,
    UnbalancedRing,
    UnbalancedBranch,
    UnknownSubstructure,
    ValenceViolation,
  };

  ParseError(Kind kind, std::size_t offset, const std::string& what)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        kind_(kind),
        offset_(offset) {}

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

// Supported grammar: organic-subset atoms (B C N O P S F Cl Br I), bracket
// atoms with charge/hcount, bonds - = # :, aromatic lowercase atoms,
// ring-closure digits 0-9, parenthesized branches. Stereo markers and
// isotopes are rejected.
AtomGraph parse_smiles_atoms(const std::string& s);

// Parse and collapse to the substructure graph: isolated simple rings that
// match a vocab ring entry become one node; everything else maps to atom
// entries. The result always passes chem_rules validity (violations raise
// ParseError instead).
MolGraph parse_smiles(const std::string& s, const SubstructureVocab& vocab);

// Inverse of parse_smiles up to isomorphism: the output reparses to a graph
// isomorphic to the input.
std::string write_smiles(const MolGraph& g, const SubstructureVocab& vocab);
std::string write_smiles_atoms(const AtomGraph& a);

struct RingPerception {
  // minimal cycle basis; each cycle lists atom indices in ring order
  std::vector<std::vector<int>> cycles;
  // cycle shares no atom with any other basis cycle
  std::vector<bool> isolated;
};

RingPerception perceive_rings(const AtomGraph& a);

// Expand a substructure graph to atoms (ring nodes expand through their
// templates); collapse is the inverse up to isomorphism.
AtomGraph expand_to_atoms(const MolGraph& g, const SubstructureVocab& vocab);
MolGraph collapse_to_substructures(const AtomGraph& a,
                                   const SubstructureVocab& vocab,
                                   std::size_t error_offset = 0);

// Parse a single-ring SMILES label (used for vocab ring templates).
RingTemplate parse_ring_label(const std::string& label);

// Corpus file: one SMILES per line, optional tab-separated name, '#'
// comments ignored.
struct CorpusRecord {
  std::string smiles;
  std::string name;
};
std::vector<CorpusRecord> read_corpus_file(const std::string& path);

}  // namespace mimosa
