#include "qknot/knot_diagram.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_map>

namespace qknot {

namespace {

[[noreturn]] void invalid(const std::string& why) { fail(ErrorKind::InvalidInput, "invalid diagram: " + why); }

struct UnionFind {
  std::unordered_map<int, int> parent;
  int find(int x) {
    auto it = parent.find(x);
    if (it == parent.end()) {
      parent[x] = x;
      return x;
    }
    if (it->second == x) return x;
    int r = find(it->second);
    parent[x] = r;
    return r;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Keep `kept` crossings with edges replaced by union-find representatives;
// representative classes listed in `loop_candidates` that no longer occur
// become crossing-free loops.
KnotDiagram rebuild(std::vector<Crossing> kept, UnionFind& uf, const std::set<int>& loop_candidates,
                    int free_loops) {
  std::set<int> present;
  for (auto& c : kept)
    for (auto& e : c.edges) {
      e = uf.find(e);
      present.insert(e);
    }
  std::set<int> loops;
  for (int e : loop_candidates) {
    int r = uf.find(e);
    if (!present.count(r)) loops.insert(r);
  }
  return KnotDiagram::from_pd(std::move(kept), free_loops + static_cast<int>(loops.size()));
}

Crossing switch_crossing(const Crossing& c) {
  const auto& [a, b, cc, d] = c.edges;
  if (c.sign > 0) return Crossing{{d, a, b, cc}, -1};
  return Crossing{{b, cc, d, a}, +1};
}

// Appends the crossings of a braid word acting on the labels in `pos`
// (index 0 = rightmost strand when travelling along the band); fresh labels
// come from `next_label`.
void braid_crossings(std::vector<int>& pos, const std::vector<int>& word, int& next_label,
                     std::vector<Crossing>& out) {
  for (int g : word) {
    int i = std::abs(g) - 1;
    if (g == 0 || i + 1 >= static_cast<int>(pos.size())) invalid("braid generator out of range");
    int sw = pos[i], nw = pos[i + 1];
    int se = next_label++, ne = next_label++;
    if (g > 0)
      out.push_back(Crossing{{sw, se, ne, nw}, +1});
    else
      out.push_back(Crossing{{nw, sw, se, ne}, -1});
    pos[i] = se;
    pos[i + 1] = ne;
  }
}

int max_label(const std::vector<Crossing>& cs) {
  int m = 0;
  for (const auto& c : cs)
    for (int e : c.edges) m = std::max(m, e);
  return m;
}

}  // namespace

KnotDiagram KnotDiagram::from_pd(std::vector<Crossing> crossings, int free_loops) {
  KnotDiagram d;
  d.crossings_ = std::move(crossings);
  d.free_loops_ = free_loops;
  d.validate_and_index();
  return d;
}

void KnotDiagram::validate_and_index() {
  if (free_loops_ < 0) invalid("negative loop count");
  std::map<int, int> head, tail;  // edge -> crossing where it enters / leaves
  std::map<int, int> count;
  for (std::size_t i = 0; i < crossings_.size(); ++i) {
    const auto& c = crossings_[i];
    if (c.sign != 1 && c.sign != -1) invalid("crossing sign must be +1 or -1");
    for (int e : c.edges) ++count[e];
    auto mark = [&](std::map<int, int>& m, int e) {
      if (!m.emplace(e, static_cast<int>(i)).second) invalid("edge " + std::to_string(e) + " has inconsistent orientation");
    };
    mark(head, c.edges[0]);
    mark(tail, c.edges[2]);
    mark(head, c.over_in());
    mark(tail, c.over_out());
  }
  for (const auto& [e, n] : count)
    if (n != 2) invalid("edge " + std::to_string(e) + " appears " + std::to_string(n) + " times");
  // Successor edge along the strand through each crossing.
  std::map<int, int> next;
  for (const auto& c : crossings_) {
    next[c.edges[0]] = c.edges[2];
    next[c.over_in()] = c.over_out();
  }
  components_.clear();
  edge_component_.clear();
  for (const auto& [e, n] : count) {
    (void)n;
    if (edge_component_.count(e)) continue;
    std::vector<int> comp;
    int cur = e;
    do {
      edge_component_[cur] = static_cast<int>(components_.size());
      comp.push_back(cur);
      cur = next.at(cur);
    } while (cur != e);
    components_.push_back(std::move(comp));
  }
  // Planarity: trace faces of the rotation system and check Euler's formula
  // on every connected piece: V - E + F = 2 per piece.
  const std::size_t V = crossings_.size();
  if (V == 0) return;
  std::map<int, std::vector<std::pair<int, int>>> ends;
  for (std::size_t i = 0; i < V; ++i)
    for (int s = 0; s < 4; ++s) ends[crossings_[i].edges[s]].emplace_back(static_cast<int>(i), s);
  auto other_end = [&](int i, int s) {
    const auto& v = ends[crossings_[i].edges[s]];
    return (v[0].first == i && v[0].second == s) ? v[1] : v[0];
  };
  std::vector<char> seen(4 * V, 0);
  std::size_t faces = 0;
  for (std::size_t start = 0; start < 4 * V; ++start) {
    if (seen[start]) continue;
    ++faces;
    std::size_t cur = start;
    while (!seen[cur]) {
      seen[cur] = 1;
      auto [j, t] = other_end(static_cast<int>(cur / 4), static_cast<int>(cur % 4));
      cur = static_cast<std::size_t>(4 * j + (t + 1) % 4);
    }
  }
  UnionFind pieces;
  for (std::size_t i = 0; i < V; ++i) {
    pieces.find(static_cast<int>(i));
    for (int s = 0; s < 4; ++s) pieces.unite(static_cast<int>(i), other_end(static_cast<int>(i), s).first);
  }
  std::set<int> roots;
  for (std::size_t i = 0; i < V; ++i) roots.insert(pieces.find(static_cast<int>(i)));
  long euler = static_cast<long>(V) - static_cast<long>(2 * V) + static_cast<long>(faces);
  if (euler != 2 * static_cast<long>(roots.size())) invalid("PD code is not planar");
}

KnotDiagram KnotDiagram::from_braid(const BraidWord& braid) {
  if (braid.strands < 1) invalid("braid needs at least one strand");
  std::vector<int> pos(static_cast<std::size_t>(braid.strands));
  std::iota(pos.begin(), pos.end(), 1);
  int next_label = braid.strands + 1;
  std::vector<Crossing> cs;
  braid_crossings(pos, braid.word, next_label, cs);
  // Closure: the final label at each position is the initial one.
  std::unordered_map<int, int> close;
  int loops = 0;
  for (int p = 0; p < braid.strands; ++p) {
    if (pos[p] == p + 1)
      ++loops;
    else
      close[pos[p]] = p + 1;
  }
  for (auto& c : cs)
    for (auto& e : c.edges)
      if (auto it = close.find(e); it != close.end()) e = it->second;
  // Compact relabelling in order of first appearance.
  std::unordered_map<int, int> relabel;
  for (auto& c : cs)
    for (auto& e : c.edges) {
      auto [it, fresh] = relabel.emplace(e, static_cast<int>(relabel.size()) + 1);
      (void)fresh;
      e = it->second;
    }
  KnotDiagram d = from_pd(std::move(cs), loops);
  d.braid_ = braid;
  return d;
}

KnotDiagram KnotDiagram::parse(const std::string& text) {
  static const std::regex xre(R"(^\s*X([pn])\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*$)");
  static const std::regex bre(R"(^\s*#\s*braid:\s*(\d+)\s*:(.*)$)");
  std::istringstream is(text);
  std::string line;
  std::vector<Crossing> cs;
  int loops = 0;
  std::optional<BraidWord> braid;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch m;
    if (std::regex_match(line, m, bre)) {
      BraidWord b;
      b.strands = std::stoi(m[1]);
      std::istringstream ws(m[2].str());
      int g;
      while (ws >> g) b.word.push_back(g);
      if (!ws.eof()) invalid("bad braid word on line " + std::to_string(lineno));
      braid = b;
      continue;
    }
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.substr(first) == "Loop") {
      ++loops;
      continue;
    }
    if (!std::regex_match(line, m, xre)) invalid("cannot parse line " + std::to_string(lineno) + ": '" + line + "'");
    Crossing c{{std::stoi(m[2]), std::stoi(m[3]), std::stoi(m[4]), std::stoi(m[5])}, m[1] == "p" ? 1 : -1};
    cs.push_back(c);
  }
  KnotDiagram d = from_pd(std::move(cs), loops);
  if (braid) {
    KnotDiagram closure = from_braid(*braid);
    bool same = closure.crossings_.size() == d.crossings_.size() && closure.free_loops_ == d.free_loops_;
    for (std::size_t i = 0; same && i < d.crossings_.size(); ++i)
      same = closure.crossings_[i].edges == d.crossings_[i].edges && closure.crossings_[i].sign == d.crossings_[i].sign;
    if (!same && sweep_width(d) <= 14 && sweep_width(closure) <= 14) same = jones(d) == jones(closure);
    if (!same) invalid("braid directive does not match the PD code");
    d.braid_ = braid;
  }
  return d;
}

KnotDiagram KnotDiagram::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "invalid diagram: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string KnotDiagram::to_pd() const {
  std::ostringstream os;
  if (braid_) {
    os << "# braid: " << braid_->strands << " :";
    for (int g : braid_->word) os << " " << g;
    os << "\n";
  }
  for (int i = 0; i < free_loops_; ++i) os << "Loop\n";
  for (const auto& c : crossings_)
    os << (c.sign > 0 ? "Xp[" : "Xn[") << c.edges[0] << "," << c.edges[1] << "," << c.edges[2] << "," << c.edges[3]
       << "]\n";
  return os.str();
}

int KnotDiagram::writhe() const {
  int w = 0;
  for (const auto& c : crossings_) w += c.sign;
  return w;
}

int KnotDiagram::self_writhe(std::size_t comp) const {
  int w = 0;
  for (const auto& c : crossings_)
    if (component_of_edge(c.edges[0]) == static_cast<int>(comp) && component_of_edge(c.edges[1]) == static_cast<int>(comp))
      w += c.sign;
  return w;
}

KnotDiagram KnotDiagram::mirror() const {
  std::vector<Crossing> cs;
  for (const auto& c : crossings_) cs.push_back(switch_crossing(c));
  KnotDiagram d = from_pd(std::move(cs), free_loops_);
  if (braid_) {
    BraidWord b = *braid_;
    for (auto& g : b.word) g = -g;
    d.braid_ = b;
  }
  return d;
}

KnotDiagram KnotDiagram::switched(std::size_t i) const {
  std::vector<Crossing> cs = crossings_;
  cs.at(i) = switch_crossing(cs.at(i));
  return from_pd(std::move(cs), free_loops_);
}

KnotDiagram KnotDiagram::smoothed(std::size_t i) const {
  const Crossing x = crossings_.at(i);
  const auto& [a, b, c, dd] = x.edges;
  UnionFind uf;
  if (x.sign > 0) {
    uf.unite(a, b);
    uf.unite(dd, c);
  } else {
    uf.unite(a, dd);
    uf.unite(b, c);
  }
  std::vector<Crossing> kept;
  for (std::size_t j = 0; j < crossings_.size(); ++j)
    if (j != i) kept.push_back(crossings_[j]);
  return rebuild(std::move(kept), uf, {a, b, c, dd}, free_loops_);
}

KnotDiagram KnotDiagram::without_component(std::size_t comp) const {
  if (comp >= components_.size()) fail(ErrorKind::InvalidInput, "no such component");
  std::vector<int> mult(components_.size(), 1);
  mult[comp] = 0;
  return cable_all(mult);
}

KnotDiagram KnotDiagram::cable(std::size_t comp, int m) const {
  if (comp >= components_.size()) fail(ErrorKind::InvalidInput, "no such component");
  std::vector<int> mult(components_.size(), 1);
  mult[comp] = m;
  return cable_all(mult);
}

KnotDiagram KnotDiagram::cable_all(const std::vector<int>& mult) const {
  if (mult.size() != components_.size()) fail(ErrorKind::InvalidInput, "one multiplicity per component required");
  for (int m : mult)
    if (m < 0) fail(ErrorKind::InvalidInput, "cable multiplicity must be >= 0");
  int next_label = max_label(crossings_) + 1;
  std::map<int, std::vector<int>> copies;  // edge -> labels of its parallels, right to left
  for (const auto& [e, c] : edge_component_) {
    auto& v = copies[e];
    for (int i = 0; i < mult[c]; ++i) v.push_back(next_label++);
  }
  std::vector<Crossing> out;
  UnionFind uf;
  std::set<int> loop_candidates;
  for (const auto& x : crossings_) {
    const auto& under_in = copies[x.edges[0]];
    const auto& under_out = copies[x.edges[2]];
    const auto& over_in = copies[x.over_in()];
    const auto& over_out = copies[x.over_out()];
    const int mu = static_cast<int>(under_in.size()), mo = static_cast<int>(over_in.size());
    if (mu == 0 || mo == 0) {
      // A deleted strand: the other one passes straight through.
      for (int i = 0; i < mu; ++i) {
        uf.unite(under_in[i], under_out[i]);
        loop_candidates.insert(under_in[i]);
      }
      for (int j = 0; j < mo; ++j) {
        uf.unite(over_in[j], over_out[j]);
        loop_candidates.insert(over_in[j]);
      }
      continue;
    }
    // Under copy i meets the over copies west to east in `under_order`; over
    // copy j meets the under copies along its own direction in `over_order`.
    std::vector<int> upos(mo), opos(mu);
    for (int j = 0; j < mo; ++j) upos[j] = x.sign > 0 ? j : mo - 1 - j;
    for (int i = 0; i < mu; ++i) opos[i] = x.sign > 0 ? mu - 1 - i : i;
    std::vector<std::vector<int>> useg(mu, std::vector<int>(mo + 1)), oseg(mo, std::vector<int>(mu + 1));
    for (int i = 0; i < mu; ++i) {
      useg[i][0] = under_in[i];
      useg[i][mo] = under_out[i];
      for (int t = 1; t < mo; ++t) useg[i][t] = next_label++;
    }
    for (int j = 0; j < mo; ++j) {
      oseg[j][0] = over_in[j];
      oseg[j][mu] = over_out[j];
      for (int t = 1; t < mu; ++t) oseg[j][t] = next_label++;
    }
    for (int i = 0; i < mu; ++i)
      for (int j = 0; j < mo; ++j) {
        int west = useg[i][upos[j]], east = useg[i][upos[j] + 1];
        int in = oseg[j][opos[i]], outl = oseg[j][opos[i] + 1];
        int north = x.sign > 0 ? in : outl;
        int south = x.sign > 0 ? outl : in;
        out.push_back(Crossing{{west, south, east, north}, x.sign});
      }
  }
  // Zero framing: full twists on the parallels of each cabled component's first edge.
  for (std::size_t comp = 0; comp < components_.size(); ++comp) {
    const int m = mult[comp];
    const int w = self_writhe(comp);
    if (m < 2 || w == 0) continue;
    const auto& band = copies[components_[comp].front()];
    std::vector<int> pos;
    for (std::size_t i = 0; i < band.size(); ++i) pos.push_back(next_label++);
    // The parallels now leave their tail crossing on fresh labels.
    std::unordered_map<int, int> start;
    for (std::size_t i = 0; i < band.size(); ++i) start[band[i]] = pos[i];
    bool moved = false;
    for (auto& c : out) {
      if (auto it = start.find(c.edges[2]); it != start.end()) {
        c.edges[2] = it->second;
        moved = true;
      }
      int& oo = c.sign > 0 ? c.edges[1] : c.edges[3];
      if (auto it = start.find(oo); it != start.end()) {
        oo = it->second;
        moved = true;
      }
    }
    if (!moved) fail(ErrorKind::Internal, "cable band has no tail crossing");
    std::vector<int> word;
    const int s = w > 0 ? -1 : 1;
    for (int t = 0; t < std::abs(w); ++t)
      for (int r = 0; r < m; ++r)
        for (int g = 1; g < m; ++g) word.push_back(s * g);
    braid_crossings(pos, word, next_label, out);
    std::unordered_map<int, int> close;
    for (std::size_t i = 0; i < band.size(); ++i) close[pos[i]] = band[i];
    for (auto& c : out)
      for (auto& e : c.edges)
        if (auto it = close.find(e); it != close.end()) e = it->second;
  }
  int loops = free_loops_;
  // Components without crossings of their own that were cabled: each
  // parallel is a loop and is found by the loop candidate scan.
  KnotDiagram d = rebuild(std::move(out), uf, loop_candidates, loops);
  return d;
}

std::vector<BigInt> chebyshev_s(int k) {
  if (k < 0) fail(ErrorKind::InvalidInput, "Chebyshev index must be >= 0");
  std::vector<BigInt> prev{1}, cur{0, 1};
  if (k == 0) return prev;
  for (int i = 1; i < k; ++i) {
    std::vector<BigInt> nxt(cur.size() + 1);
    for (std::size_t j = 0; j < cur.size(); ++j) nxt[j + 1] += cur[j];
    for (std::size_t j = 0; j < prev.size(); ++j) nxt[j] -= prev[j];
    prev = std::move(cur);
    cur = std::move(nxt);
  }
  return cur;
}

LaurentPoly quantum_integer(int N) {
  if (N < 0) fail(ErrorKind::InvalidInput, "quantum integer needs N >= 0");
  std::vector<LaurentPoly::Term> t;
  for (int k = 0; k < N; ++k) t.emplace_back(N - 1 - 2 * k, BigInt(1));
  return LaurentPoly::from_terms(std::move(t));
}

LaurentPoly colored_jones(const KnotDiagram& d, const std::vector<int>& colors, const BracketOptions& opt,
                          int loop_color) {
  const std::size_t nc = d.components().size();
  if (colors.size() != nc) fail(ErrorKind::InvalidInput, "one color per component required");
  for (int c : colors)
    if (c < 1) fail(ErrorKind::InvalidInput, "colors must be >= 1");
  if (loop_color < 1) fail(ErrorKind::InvalidInput, "colors must be >= 1");
  std::vector<std::vector<BigInt>> cheb;
  for (int c : colors) cheb.push_back(chebyshev_s(c - 1));
  LaurentPoly total;
  std::vector<int> mult(nc, 0);
  // Enumerate multiplicities with nonzero Chebyshev coefficients.
  std::function<void(std::size_t, BigInt)> rec = [&](std::size_t i, BigInt coef) {
    if (i == nc) {
      KnotDiagram cabled = d.cable_all(mult);
      total += jones(cabled, opt) * coef;
      return;
    }
    for (std::size_t m = 0; m < cheb[i].size(); ++m) {
      if (cheb[i][m] == 0) continue;
      mult[i] = static_cast<int>(m);
      rec(i + 1, coef * cheb[i][m]);
    }
  };
  // Free loops of d are split unknots colored loop_color; jones() counts them
  // with color 2, so correct by the ratio.
  rec(0, BigInt(1));
  if (d.free_loops() > 0 && loop_color != 2) {
    LaurentPoly num = quantum_integer(loop_color).pow(static_cast<unsigned>(d.free_loops()));
    LaurentPoly den = quantum_integer(2).pow(static_cast<unsigned>(d.free_loops()));
    total = (total * num).exact_div(den);
  }
  return total;
}

LaurentPoly colored_jones(const KnotDiagram& d, int N, const BracketOptions& opt) {
  if (d.num_components() != 1) fail(ErrorKind::InvalidInput, "colored_jones(d, N) needs a knot");
  if (d.components().empty()) return quantum_integer(N);
  return colored_jones(d, std::vector<int>{N}, opt);
}

LaurentPoly normalized_colored_jones(const KnotDiagram& d, int N, const BracketOptions& opt) {
  if (N < 1) fail(ErrorKind::InvalidInput, "color must be >= 1");
  LaurentPoly j = colored_jones(d, N, opt);
  LaurentPoly r = j.exact_div(quantum_integer(N));
  if (!r.is_integral()) fail(ErrorKind::Internal, "normalized colored Jones has half-integer exponents");
  return r;
}

LaurentPoly normalized_colored_jones_auto(const KnotDiagram& d, int N, const BracketOptions& opt) {
  if (d.braid() && d.num_components() == 1) return normalized_colored_jones_braid(*d.braid(), N);
  return normalized_colored_jones(d, N, opt);
}

// ------------------------------------------------------------------ Alexander

LaurentPoly alexander(const KnotDiagram& d) {
  if (d.num_components() != 1) fail(ErrorKind::InvalidInput, "Alexander polynomial needs a knot");
  const auto& cs = d.crossings();
  if (cs.empty()) return LaurentPoly(1);
  // Wirtinger arcs: the over-strand continues through each crossing.
  UnionFind uf;
  for (const auto& c : cs) uf.unite(c.edges[1], c.edges[3]);
  std::map<int, int> arc_index;
  for (const auto& c : cs)
    for (int e : c.edges) arc_index.emplace(uf.find(e), 0);
  int n = 0;
  for (auto& [r, idx] : arc_index) idx = n++;
  if (n != static_cast<int>(cs.size())) fail(ErrorKind::Internal, "arc count differs from crossing count");
  const LaurentPoly t = LaurentPoly::q_power(1), one(1);
  std::vector<std::vector<LaurentPoly>> M(cs.size(), std::vector<LaurentPoly>(n));
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& c = cs[i];
    int over = arc_index[uf.find(c.edges[1])];
    int in = arc_index[uf.find(c.edges[0])];
    int out = arc_index[uf.find(c.edges[2])];
    M[i][over] += one - t;
    if (c.sign > 0) {
      M[i][in] += t;
      M[i][out] -= one;
    } else {
      M[i][in] -= one;
      M[i][out] += t;
    }
  }
  // Determinant of the minor without the last row and column (Bareiss).
  const int k = n - 1;
  std::vector<std::vector<LaurentPoly>> A(k, std::vector<LaurentPoly>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) A[i][j] = M[i][j];
  LaurentPoly prev(1);
  int sign = 1;
  for (int p = 0; p < k; ++p) {
    int piv = p;
    while (piv < k && A[piv][p].is_zero()) ++piv;
    if (piv == k) return LaurentPoly();  // singular: not a knot diagram
    if (piv != p) {
      std::swap(A[piv], A[p]);
      sign = -sign;
    }
    for (int i = p + 1; i < k; ++i) {
      for (int j = p + 1; j < k; ++j) A[i][j] = (A[p][p] * A[i][j] - A[i][p] * A[p][j]).exact_div(prev);
      A[i][p] = LaurentPoly();
    }
    prev = A[p][p];
  }
  LaurentPoly det = k > 0 ? A[k - 1][k - 1] : LaurentPoly(1);
  if (sign < 0) det = -det;
  if (det.is_zero()) fail(ErrorKind::Internal, "vanishing Alexander determinant");
  std::int64_t lo = det.min_twice_exp(), hi = det.max_twice_exp();
  if ((lo + hi) % 4 != 0) fail(ErrorKind::Internal, "Alexander polynomial has odd span");
  det = det.shifted_twice(-(lo + hi) / 2);
  BigInt v = det.at_one();
  if (v == -1) det = -det;
  if (det.at_one() != 1) fail(ErrorKind::Internal, "Alexander polynomial not normalisable to Delta(1)=1");
  return det;
}

}  // namespace qknot
