// Kauffman bracket by planar contraction in the Temperley-Lieb category.
//
// The processed crossings always form a disk whose boundary is a cyclic list
// of open edge labels; a state is a non-crossing matching of the boundary
// points with a polynomial weight in A. Each step glues one crossing along a
// contiguous run of shared edges.

#include <algorithm>
#include <optional>
#include <unordered_map>

#include "qknot/knot_diagram.hpp"

namespace qknot {

namespace {

struct Overflow {};

// Polynomial in A with exponents lo, lo+2, lo+4, ...
template <class C>
struct APoly {
  int lo = 0;
  std::vector<C> c;
};

inline void addmul(std::int64_t& acc, std::int64_t x, std::int64_t y) {
  std::int64_t p;
  if (__builtin_mul_overflow(x, y, &p) || __builtin_add_overflow(acc, p, &acc)) throw Overflow{};
}
inline void addmul(BigInt& acc, const BigInt& x, const BigInt& y) {
  mpz_addmul(acc.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
}
inline void addto(std::int64_t& acc, std::int64_t x) {
  if (__builtin_add_overflow(acc, x, &acc)) throw Overflow{};
}
inline void addto(BigInt& acc, const BigInt& x) { acc += x; }
inline bool is_zero(std::int64_t x) { return x == 0; }
inline bool is_zero(const BigInt& x) { return x == 0; }

template <class C>
APoly<C> mul(const APoly<C>& a, const APoly<C>& b) {
  APoly<C> r;
  if (a.c.empty() || b.c.empty()) return r;
  r.lo = a.lo + b.lo;
  r.c.assign(a.c.size() + b.c.size() - 1, C(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (is_zero(a.c[i])) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) addmul(r.c[i + j], a.c[i], b.c[j]);
  }
  return r;
}

template <class C>
void accumulate(APoly<C>& acc, const APoly<C>& x) {
  if (x.c.empty()) return;
  if (acc.c.empty()) {
    acc = x;
    return;
  }
  int lo = std::min(acc.lo, x.lo);
  int hi = std::max(acc.lo + 2 * static_cast<int>(acc.c.size()), x.lo + 2 * static_cast<int>(x.c.size()));
  if (lo < acc.lo || hi > acc.lo + 2 * static_cast<int>(acc.c.size())) {
    std::vector<C> nc(static_cast<std::size_t>((hi - lo) / 2), C(0));
    for (std::size_t i = 0; i < acc.c.size(); ++i) nc[(acc.lo - lo) / 2 + i] = std::move(acc.c[i]);
    acc.c = std::move(nc);
    acc.lo = lo;
  }
  for (std::size_t i = 0; i < x.c.size(); ++i) addto(acc.c[(x.lo - acc.lo) / 2 + i], x.c[i]);
}

template <class C>
APoly<C> monomial(int e, long coef = 1) {
  APoly<C> r;
  r.lo = e;
  r.c.push_back(C(coef));
  return r;
}

using Code = std::uint64_t;

Code encode(const std::vector<int>& partner) {
  Code code = 0;
  for (std::size_t i = 0; i < partner.size(); ++i)
    if (partner[i] > static_cast<int>(i)) code |= Code(1) << i;
  return code;
}

void decode(Code code, int n, std::vector<int>& partner, std::vector<int>& stack) {
  partner.assign(static_cast<std::size_t>(n), -1);
  stack.clear();
  for (int i = 0; i < n; ++i) {
    if ((code >> i) & 1) {
      stack.push_back(i);
    } else {
      int j = stack.back();
      stack.pop_back();
      partner[i] = j;
      partner[j] = i;
    }
  }
}

// A crossing as a tangle: labels appearing once, counterclockwise, and its
// states as (partner array, weight exponent of A, number of closed loops).
struct PieceState {
  std::vector<int> partner;
  int a_exp;
  int loops;
};
struct Piece {
  std::vector<int> boundary;
  std::vector<PieceState> states;
};

Piece crossing_piece(const Crossing& x) {
  const auto& L = x.edges;
  // A-smoothing pairs slots (0,1),(2,3); the other pairs (0,3),(1,2).
  std::array<std::array<int, 4>, 2> pairings{{{1, 0, 3, 2}, {3, 2, 1, 0}}};
  std::array<int, 2> expo{1, -1};
  std::vector<int> keep;
  for (int s = 0; s < 4; ++s)
    if (std::count(L.begin(), L.end(), L[s]) == 1) keep.push_back(s);
  Piece p;
  for (int s : keep) p.boundary.push_back(L[s]);
  for (int k = 0; k < 2; ++k) {
    const auto& pr = pairings[k];
    // Joined slots: equal labels within the crossing (kinks).
    auto glued = [&](int s) {
      for (int t = 0; t < 4; ++t)
        if (t != s && L[t] == L[s]) return t;
      return -1;
    };
    std::vector<char> seen(4, 0);
    PieceState st;
    st.a_exp = expo[k];
    st.loops = 0;
    st.partner.assign(keep.size(), -1);
    auto idx = [&](int s) { return static_cast<int>(std::find(keep.begin(), keep.end(), s) - keep.begin()); };
    for (int s : keep) {
      if (seen[s]) continue;
      int cur = s;
      seen[cur] = 1;
      int nxt = pr[cur];
      while (glued(nxt) >= 0) {
        seen[nxt] = 1;
        cur = glued(nxt);
        seen[cur] = 1;
        nxt = pr[cur];
      }
      seen[nxt] = 1;
      st.partner[idx(s)] = idx(nxt);
      st.partner[idx(nxt)] = idx(s);
    }
    for (int s = 0; s < 4; ++s) {
      if (seen[s]) continue;
      ++st.loops;
      int cur = s;
      while (!seen[cur]) {
        seen[cur] = 1;
        int nxt = pr[cur];
        seen[nxt] = 1;
        cur = glued(nxt);
      }
    }
    p.states.push_back(std::move(st));
  }
  return p;
}

struct Step {
  bool new_component = false;
  std::size_t crossing = 0;
  int rot_b = 0;                // boundary rotated left by rot_b so the shared run ends it
  std::vector<int> c_rotated;   // piece boundary starting with the shared run (reversed)
  std::vector<int> c_perm;      // c_perm[i] = index into the piece boundary of c_rotated[i]
  int shared = 0;
  std::vector<int> new_boundary;
};

struct Plan {
  std::vector<Step> steps;
  std::vector<Piece> pieces;
  int max_width = 0;
};

// Alignment of a piece boundary C against the tangle boundary B.
std::optional<Step> align(const std::vector<int>& B, const std::vector<int>& C) {
  const int nb = static_cast<int>(B.size()), nc = static_cast<int>(C.size());
  std::vector<char> in_b(static_cast<std::size_t>(nc), 0);
  int j = 0;
  for (int i = 0; i < nc; ++i)
    if (std::find(B.begin(), B.end(), C[i]) != B.end()) {
      in_b[i] = 1;
      ++j;
    }
  if (j == 0) return std::nullopt;
  // Run start in C: first shared index whose predecessor is not shared.
  int cs = -1;
  if (j == nc) {
    cs = 0;
  } else {
    for (int i = 0; i < nc; ++i)
      if (in_b[i] && !in_b[(i + nc - 1) % nc]) {
        if (cs >= 0) return std::nullopt;  // two runs
        cs = i;
      }
  }
  for (int k = 0; k < j; ++k)
    if (!in_b[(cs + k) % nc]) return std::nullopt;
  // In B the run must read C[cs+j-1], ..., C[cs] consecutively.
  int pb = static_cast<int>(std::find(B.begin(), B.end(), C[(cs + j - 1) % nc]) - B.begin());
  for (int k = 0; k < j; ++k)
    if (B[(pb + k) % nb] != C[(cs + j - 1 - k) % nc]) return std::nullopt;
  Step st;
  st.shared = j;
  st.rot_b = (pb + j) % nb;  // after rotating, B' ends with the run
  for (int k = 0; k < nc; ++k) {
    st.c_perm.push_back((cs + k) % nc);
    st.c_rotated.push_back(C[(cs + k) % nc]);
  }
  for (int k = 0; k < nb - j; ++k) st.new_boundary.push_back(B[(st.rot_b + k) % nb]);
  for (int k = j; k < nc; ++k) st.new_boundary.push_back(st.c_rotated[k]);
  return st;
}

Plan make_plan(const KnotDiagram& d) {
  Plan plan;
  const auto& cs = d.crossings();
  for (const auto& x : cs) plan.pieces.push_back(crossing_piece(x));
  std::unordered_map<int, std::vector<std::size_t>> where;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (int e : plan.pieces[i].boundary) where[e].push_back(i);
  std::vector<char> done(cs.size(), 0);
  std::vector<int> B;
  std::size_t remaining = cs.size();
  while (remaining > 0) {
    std::optional<Step> best;
    if (B.empty()) {
      std::size_t i = static_cast<std::size_t>(std::find(done.begin(), done.end(), 0) - done.begin());
      Step st;
      st.new_component = true;
      st.crossing = i;
      st.shared = 0;
      st.rot_b = 0;
      const auto& C = plan.pieces[i].boundary;
      st.c_rotated = C;
      for (std::size_t k = 0; k < C.size(); ++k) st.c_perm.push_back(static_cast<int>(k));
      st.new_boundary = C;
      best = st;
    } else {
      std::vector<std::size_t> cand;
      for (int e : B)
        for (std::size_t i : where[e])
          if (!done[i]) cand.push_back(i);
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
      for (std::size_t i : cand) {
        auto st = align(B, plan.pieces[i].boundary);
        if (!st) continue;
        st->crossing = i;
        if (!best || st->shared > best->shared ||
            (st->shared == best->shared && st->new_boundary.size() < best->new_boundary.size()))
          best = st;
      }
      if (!best) fail(ErrorKind::Internal, "planar sweep found no contiguous gluing");
    }
    done[best->crossing] = 1;
    --remaining;
    B = best->new_boundary;
    plan.max_width = std::max(plan.max_width, static_cast<int>(B.size()));
    plan.steps.push_back(std::move(*best));
  }
  return plan;
}

template <class C>
APoly<C> loop_power(int k, std::vector<APoly<C>>& cache) {
  while (static_cast<int>(cache.size()) <= k) {
    if (cache.empty()) {
      cache.push_back(monomial<C>(0));
      continue;
    }
    APoly<C> loop;
    loop.lo = -2;
    loop.c = {C(-1), C(0), C(-1)};
    cache.push_back(mul(cache.back(), loop));
  }
  return cache[static_cast<std::size_t>(k)];
}

template <class C>
APoly<C> run_plan(const Plan& plan) {
  using StateMap = std::unordered_map<Code, APoly<C>>;
  std::vector<APoly<C>> loops_cache;
  APoly<C> total = monomial<C>(0);
  StateMap states;
  int nb = 0;
  std::vector<int> tpart, tpart_rot, stack, newpart, vis;
  auto flush_component = [&]() {
    if (states.empty()) return;
    auto it = states.find(0);
    if (nb != 0 || states.size() != 1 || it == states.end()) fail(ErrorKind::Internal, "unfinished sweep");
    total = mul(total, it->second);
    states.clear();
  };
  for (const auto& st : plan.steps) {
    const Piece& piece = plan.pieces[st.crossing];
    const int nc = static_cast<int>(piece.boundary.size());
    if (st.new_component) {
      flush_component();
      for (const auto& ps : piece.states) {
        std::vector<int> part(static_cast<std::size_t>(nc));
        for (int k = 0; k < nc; ++k) part[k] = ps.partner[k];
        APoly<C> w = mul(monomial<C>(ps.a_exp), loop_power<C>(ps.loops, loops_cache));
        accumulate(states[encode(part)], w);
      }
      nb = nc;
      continue;
    }
    const int j = st.shared;
    // Piece states in rotated order.
    std::vector<int> inv(static_cast<std::size_t>(nc));
    for (int k = 0; k < nc; ++k) inv[st.c_perm[k]] = k;
    std::vector<std::vector<int>> ppart;
    std::vector<APoly<C>> pweight;
    for (const auto& ps : piece.states) {
      std::vector<int> part(static_cast<std::size_t>(nc));
      for (int k = 0; k < nc; ++k) part[k] = inv[ps.partner[st.c_perm[k]]];
      ppart.push_back(std::move(part));
      pweight.push_back(mul(monomial<C>(ps.a_exp), loop_power<C>(ps.loops, loops_cache)));
    }
    const int nn = nb - j + nc - j;
    StateMap next;
    next.reserve(states.size() * 2);
    for (auto& [code, poly] : states) {
      decode(code, nb, tpart, stack);
      tpart_rot.assign(static_cast<std::size_t>(nb), 0);
      for (int k = 0; k < nb; ++k) tpart_rot[k] = (tpart[(k + st.rot_b) % nb] - st.rot_b + nb) % nb;
      for (std::size_t s = 0; s < ppart.size(); ++s) {
        const auto& pp = ppart[s];
        newpart.assign(static_cast<std::size_t>(nn), -1);
        vis.assign(static_cast<std::size_t>(j), 0);  // shared points, indexed by C position
        // Free points: tangle side 0..nb-j-1 and piece side j..nc-1.
        auto walk = [&](bool tside, int pos) -> std::pair<bool, int> {
          // Follow from a free point through the glued region to the other free end.
          for (;;) {
            if (tside) {
              int q = tpart_rot[pos];
              if (q < nb - j) return {true, q};
              int c = nb - 1 - q;
              vis[c] = 1;
              pos = c;
              tside = false;
              int c2 = pp[pos];
              if (c2 >= j) return {false, c2};
              vis[c2] = 1;
              pos = nb - 1 - c2;
              tside = true;
            } else {
              int c2 = pp[pos];
              if (c2 >= j) return {false, c2};
              vis[c2] = 1;
              pos = nb - 1 - c2;
              tside = true;
            }
          }
        };
        for (int p = 0; p < nb - j; ++p) {
          if (newpart[p] >= 0) continue;
          auto [ts, q] = walk(true, p);
          int nq = ts ? q : nb - j + (q - j);
          newpart[p] = nq;
          newpart[nq] = p;
        }
        for (int c = j; c < nc; ++c) {
          int np = nb - j + (c - j);
          if (newpart[np] >= 0) continue;
          auto [ts, q] = walk(false, c);
          int nq = ts ? q : nb - j + (q - j);
          newpart[np] = nq;
          newpart[nq] = np;
        }
        int loops = 0;
        for (int c = 0; c < j; ++c) {
          if (vis[c]) continue;
          ++loops;
          int cur = c;
          while (!vis[cur]) {
            vis[cur] = 1;
            int b = nb - 1 - cur;
            int b2 = tpart_rot[b];
            int c2 = nb - 1 - b2;
            vis[c2] = 1;
            cur = pp[c2];
          }
        }
        APoly<C> w = mul(poly, pweight[s]);
        if (loops) w = mul(w, loop_power<C>(loops, loops_cache));
        accumulate(next[encode(newpart)], w);
      }
    }
    // Drop cancelled states.
    for (auto it = next.begin(); it != next.end();) {
      bool zero = std::all_of(it->second.c.begin(), it->second.c.end(), [](const C& x) { return is_zero(x); });
      it = zero ? next.erase(it) : std::next(it);
    }
    states = std::move(next);
    nb = nn;
    if (states.empty()) return APoly<C>{};
  }
  flush_component();
  return total;
}

template <class C>
LaurentPoly to_jones(const APoly<C>& bracket, const KnotDiagram& d) {
  // J = (-1)^c (-A^3)^{-w} <L> with q^{1/2} = A^2.
  const int w = d.writhe();
  const int c = static_cast<int>(d.num_components());
  const int sign = ((c + w) % 2 == 0) ? 1 : -1;
  std::vector<LaurentPoly::Term> terms;
  for (std::size_t i = 0; i < bracket.c.size(); ++i) {
    if (is_zero(bracket.c[i])) continue;
    int e = bracket.lo + 2 * static_cast<int>(i) - 3 * w;
    if (e % 2 != 0) fail(ErrorKind::Internal, "odd power of A in the normalised bracket");
    BigInt v(bracket.c[i]);
    terms.emplace_back(e / 2, sign > 0 ? v : BigInt(-v));
  }
  return LaurentPoly::from_terms(std::move(terms));
}

}  // namespace

int sweep_width(const KnotDiagram& d) { return make_plan(d).max_width; }

LaurentPoly jones(const KnotDiagram& d, const BracketOptions& opt) {
  Plan plan = make_plan(d);
  if (plan.max_width > opt.width_budget)
    fail(ErrorKind::BudgetExceeded, "budget exceeded: strand width " + std::to_string(plan.max_width) +
                                        " exceeds the budget " + std::to_string(opt.width_budget));
  if (plan.max_width > 62) fail(ErrorKind::BudgetExceeded, "budget exceeded: strand width above 62");
  auto with_loops = [&](auto bracket) {
    using C = std::decay_t<decltype(bracket.c[0])>;
    std::vector<APoly<C>> cache;
    return mul(bracket, loop_power<C>(d.free_loops(), cache));
  };
  try {
    auto br = with_loops(run_plan<std::int64_t>(plan));
    return to_jones(br, d);
  } catch (const Overflow&) {
    auto br = with_loops(run_plan<BigInt>(plan));
    return to_jones(br, d);
  }
}

}  // namespace qknot
