#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qknot/qseries.hpp"

namespace qknot {

// PD crossing: edge labels counterclockwise starting at the incoming
// under-strand. The under-strand runs slot 0 -> slot 2; the over-strand runs
// slot 3 -> slot 1 for a positive crossing and slot 1 -> slot 3 for a negative one.
struct Crossing {
  std::array<int, 4> edges;
  int sign;  // +1 or -1

  int over_in() const { return sign > 0 ? edges[3] : edges[1]; }
  int over_out() const { return sign > 0 ? edges[1] : edges[3]; }
};

// Braid word on `strands` strands; generator i > 0 is a positive crossing of
// positions i-1, i and -i its inverse.
struct BraidWord {
  int strands = 1;
  std::vector<int> word;
};

class KnotDiagram {
 public:
  KnotDiagram() = default;
  // Validates: every edge appears exactly twice, orientations are
  // consistent, and the rotation system is planar.
  static KnotDiagram from_pd(std::vector<Crossing> crossings, int free_loops = 0);
  static KnotDiagram from_braid(const BraidWord& braid);
  // Text format: lines "Xp[a,b,c,d]" / "Xn[a,b,c,d]", "Loop" for a
  // crossing-free component, "#" comments; "# braid: <strands> : <word>"
  // attaches a braid word whose closure must reproduce the PD code.
  static KnotDiagram parse(const std::string& text);
  static KnotDiagram load(const std::filesystem::path& path);
  std::string to_pd() const;

  const std::vector<Crossing>& crossings() const { return crossings_; }
  int free_loops() const { return free_loops_; }
  std::size_t num_crossings() const { return crossings_.size(); }
  int writhe() const;
  // Components with crossings, each as its edge sequence along the orientation.
  // Crossing-free loops are not listed here; see free_loops().
  const std::vector<std::vector<int>>& components() const { return components_; }
  std::size_t num_components() const { return components_.size() + static_cast<std::size_t>(free_loops_); }
  int component_of_edge(int edge) const { return edge_component_.at(edge); }
  // Sum of signs of crossings whose two strands both lie on component `comp`.
  int self_writhe(std::size_t comp) const;
  const std::optional<BraidWord>& braid() const { return braid_; }

  KnotDiagram mirror() const;
  // Crossing change at index i (same planar projection).
  KnotDiagram switched(std::size_t i) const;
  // Oriented smoothing at index i.
  KnotDiagram smoothed(std::size_t i) const;
  // Remove component `comp` (an index into components()).
  KnotDiagram without_component(std::size_t comp) const;
  // Replace component `comp` by m blackboard parallels, then add full twists
  // so that the parallels have zero framing. m == 0 deletes the component.
  KnotDiagram cable(std::size_t comp, int m) const;
  // Cable every component at once; multiplicities indexed like components().
  KnotDiagram cable_all(const std::vector<int>& mult) const;

 private:
  std::vector<Crossing> crossings_;
  int free_loops_ = 0;
  std::vector<std::vector<int>> components_;
  std::map<int, int> edge_component_;
  std::optional<BraidWord> braid_;

  void validate_and_index();
};

// Kauffman bracket engine configuration.
struct BracketOptions {
  int width_budget = 14;  // maximal number of open strands during the sweep
};

// Jones polynomial normalised so the unknot gives q^{1/2}+q^{-1/2} and the
// skein relation q J(+) - q^{-1} J(-) = (q^{1/2}-q^{-1/2}) J(0) holds.
LaurentPoly jones(const KnotDiagram& d, const BracketOptions& opt = {});

// Largest open-strand count the sweep would reach (without evaluating).
int sweep_width(const KnotDiagram& d);

// Colored Jones J_{L,c} through cabling and the Chebyshev expansion of the
// coloring rules. `colors` is indexed like components(); free loops carry
// color 2 unless `loop_color` says otherwise.
LaurentPoly colored_jones(const KnotDiagram& d, const std::vector<int>& colors, const BracketOptions& opt = {},
                          int loop_color = 2);
// Colored Jones of a knot with color N.
LaurentPoly colored_jones(const KnotDiagram& d, int N, const BracketOptions& opt = {});
// [N] = J of the unknot colored N.
LaurentPoly quantum_integer(int N);
// Normalized colored Jones J_{K,N}/[N] via cabling.
LaurentPoly normalized_colored_jones(const KnotDiagram& d, int N, const BracketOptions& opt = {});

// Normalized colored Jones from the braid attached to the diagram, using the
// quantum group R-matrix; exact, and much cheaper than cabling for large N.
LaurentPoly normalized_colored_jones_braid(const BraidWord& braid, int N);

// Picks the braid engine when the diagram carries a braid word, otherwise cabling.
LaurentPoly normalized_colored_jones_auto(const KnotDiagram& d, int N, const BracketOptions& opt = {});

// Alexander polynomial in t (stored as an integral LaurentPoly in the variable),
// normalised by Delta(1) = 1 and Delta(t) = Delta(1/t).
LaurentPoly alexander(const KnotDiagram& d);

// Chebyshev polynomial S_k(z) with S_0 = 1, S_1 = z; coefficients by power of z.
std::vector<BigInt> chebyshev_s(int k);

}  // namespace qknot
