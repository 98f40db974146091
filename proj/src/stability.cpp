#include "qknot/stability.hpp"

#include <algorithm>
#include <map>

#include "qknot/holonomic.hpp"
#include "qknot/knot_diagram.hpp"
#include "qknot/nahm.hpp"

namespace qknot {

namespace {

std::int64_t to_int(const Rational& r) {
  BigInt c;
  mpz_cdiv_q(c.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return c.get_si();
}

StabilityShell settle(const SeriesSequence& seq) {
  if (seq.terms.empty()) fail(ErrorKind::InvalidInput, "empty sequence");
  for (const auto& t : seq.terms)
    if (t.den() != 1) fail(ErrorKind::InvalidInput, "stability needs integral exponents");
  const auto W = static_cast<std::int64_t>(seq.terms.size());
  const std::int64_t need = std::max<std::int64_t>(2, (W + 2) / 3);
  std::int64_t m_lo = 0, m_hi = 0;
  bool any = false;
  for (const auto& t : seq.terms) {
    m_hi = std::max(m_hi, t.trunc_num());
    if (t.valuation_num() < t.trunc_num()) {
      m_lo = any ? std::min(m_lo, t.valuation_num()) : t.valuation_num();
      any = true;
    }
  }
  if (!any) m_lo = std::min_element(seq.terms.begin(), seq.terms.end(), [](const auto& a, const auto& b) {
                     return a.trunc_num() < b.trunc_num();
                   })->trunc_num() - 1;
  StabilityShell sh;
  sh.m_lo = m_lo;
  std::vector<BigInt> coeffs;
  std::int64_t running = seq.first;
  std::int64_t m = m_lo;
  for (; m < m_hi; ++m) {
    std::vector<std::int64_t> known;
    for (std::int64_t i = 0; i < W; ++i)
      if (seq.terms[static_cast<std::size_t>(i)].trunc_num() > m) known.push_back(i);
    if (known.empty()) break;
    const BigInt value = seq.terms[static_cast<std::size_t>(known.back())].coeff_num(m);
    std::int64_t run = 0, start = known.back();
    for (auto it = known.rbegin(); it != known.rend(); ++it) {
      if (seq.terms[static_cast<std::size_t>(*it)].coeff_num(m) != value) break;
      ++run;
      start = *it;
    }
    if (run < need) break;
    running = std::max(running, seq.first + start);
    sh.witness.push_back(running);
    coeffs.push_back(value);
  }
  if (coeffs.empty())
    fail(ErrorKind::PropertyViolation, "not 0-stable on window: coefficient of q^" + std::to_string(m_lo) +
                                           " does not settle");
  sh.verified_to = Rational(big(m));
  sh.phi = TruncatedSeries::from_coeffs(m_lo, std::move(coeffs), m);
  return sh;
}

struct TableRow {
  std::vector<std::int64_t> mirror;
  std::optional<std::vector<std::int64_t>> plain;  // empty: unidentified
  bool fixture_is_mirror;
};

// The shipped 3_1 and 5_2 diagrams are mirrors of the knots the table lists.
const std::map<std::string, TableRow>& table() {
  static const std::map<std::string, TableRow> t = {
      {"3_1", {{3}, std::vector<std::int64_t>{2}, true}},
      {"4_1", {{3}, std::vector<std::int64_t>{3}, false}},
      {"5_2", {{4}, std::vector<std::int64_t>{3}, true}},
      {"6_3", {{3, 3}, std::vector<std::int64_t>{3, 3}, false}},
      {"8_5", {{3}, std::nullopt, false}},
  };
  return t;
}

std::string label(const std::vector<std::int64_t>& bs) {
  std::map<std::int64_t, int> count;
  for (auto b : bs) ++count[b];
  std::string s;
  for (const auto& [b, k] : count) {
    if (!s.empty()) s += " ";
    s += "h_" + std::to_string(b);
    if (k > 1) s += "^" + std::to_string(k);
  }
  return s.empty() ? "1" : s;
}

}  // namespace

SeriesSequence polynomial_sequence(const std::vector<LaurentPoly>& polys, std::int64_t first, bool normalize) {
  std::vector<LaurentPoly> ps;
  for (const auto& p : polys) {
    if (!normalize) {
      ps.push_back(p);
      continue;
    }
    if (p.is_zero()) fail(ErrorKind::InvalidInput, "cannot normalize the zero polynomial");
    LaurentPoly q = p.shifted_twice(-p.min_twice_exp());
    if (q.coeff(0) < 0) q = -q;
    if (q.coeff(0) != 1) fail(ErrorKind::InvalidInput, "lowest coefficient is not a unit");
    ps.push_back(q);
  }
  std::int64_t horizon = 1;
  for (const auto& p : ps) {
    if (!p.is_integral()) fail(ErrorKind::InvalidInput, "stability needs integral exponents");
    if (!p.is_zero()) horizon = std::max(horizon, p.max_twice_exp() / 2 + 1);
  }
  SeriesSequence s;
  s.first = first;
  for (const auto& p : ps) s.terms.push_back(TruncatedSeries::from_poly(p, Rational(big(horizon))));
  return s;
}

StabilityReport zero_stable_limit(const SeriesSequence& seq) {
  StabilityReport r;
  r.shells.push_back(settle(seq));
  return r;
}

StabilityReport zero_stable_limit(const std::vector<LaurentPoly>& seq, std::int64_t first, bool normalize) {
  return zero_stable_limit(polynomial_sequence(seq, first, normalize));
}

StabilityReport stable_shells(const SeriesSequence& seq, int k_max) {
  StabilityReport r;
  SeriesSequence residual = seq;
  for (int k = 0; k <= k_max; ++k) {
    SeriesSequence g;
    g.first = seq.first;
    for (std::size_t i = 0; i < residual.terms.size(); ++i) {
      std::int64_t n = seq.first + static_cast<std::int64_t>(i);
      g.terms.push_back(residual.terms[i].shifted(Rational(big(-k * n))));
    }
    StabilityShell sh;
    try {
      sh = settle(g);
    } catch (const Error& e) {
      fail(e.kind(), "shell " + std::to_string(k) + ": " + e.what());
    }
    for (std::size_t i = 0; i < residual.terms.size(); ++i) {
      std::int64_t n = seq.first + static_cast<std::int64_t>(i);
      residual.terms[i] = residual.terms[i] - sh.phi.shifted(Rational(big(k * n)));
    }
    r.shells.push_back(std::move(sh));
  }
  return r;
}

std::optional<std::int64_t> shell_residual_violation(const SeriesSequence& seq, const StabilityReport& rep) {
  std::int64_t from = seq.first;
  for (const auto& sh : rep.shells)
    if (!sh.witness.empty()) from = std::max(from, sh.witness.back());
  const auto k = static_cast<std::int64_t>(rep.shells.size()) - 1;
  for (std::size_t i = 0; i < seq.terms.size(); ++i) {
    std::int64_t n = seq.first + static_cast<std::int64_t>(i);
    if (n <= from) continue;
    TruncatedSeries res = seq.terms[i];
    for (std::int64_t j = 0; j <= k; ++j) res = res - rep.shells[j].phi.shifted(Rational(big(j * n)));
    std::int64_t v = res.valuation_num();
    if (v < res.trunc_num() && v <= k * n) return n;
  }
  return std::nullopt;
}

TruncatedSeries h_product(const std::vector<std::int64_t>& bs, const Rational& trunc) {
  TruncatedSeries p = TruncatedSeries::one(to_int(trunc));
  for (auto b : bs) p = p * h_series(b, trunc);
  return p.truncated(trunc);
}

TableMatch verify_table_entry(const std::string& knot, TableColumn column, const Rational& trunc, std::int64_t n_max,
                              const std::filesystem::path& data_dir, TableGenerator generator) {
  auto it = table().find(knot);
  if (it == table().end()) fail(ErrorKind::InvalidInput, "no generator available for " + knot);
  const TableRow& row = it->second;
  const std::int64_t t = to_int(trunc);
  if (t < 1) fail(ErrorKind::InvalidInput, "trunc must be positive");
  if (n_max <= 0) n_max = t + 3;
  const std::int64_t n_min = std::max<std::int64_t>(0, n_max - 6);

  TableMatch out;
  out.knot = knot;
  out.column = column;
  out.fixture_is_mirror = row.fixture_is_mirror;
  const bool flip = (column == TableColumn::Mirror) != row.fixture_is_mirror;

  KnotDiagram d = KnotDiagram::load(data_dir / (knot + ".pd"));
  std::vector<LaurentPoly> values;  // J_{K,n+1}, n = n_min..n_max
  const auto rec_path = data_dir / ("rec_" + knot + ".rec");
  if (generator == TableGenerator::Auto && std::filesystem::exists(rec_path)) {
    out.generator = "recursion";
    RecurrenceOperator rec = RecurrenceOperator::load(rec_path);
    Sequence init;
    init.first = 1;
    for (int n = 1; n <= rec.order(); ++n) init.values.push_back(normalized_colored_jones_auto(d, n));
    Sequence all = apply(rec, init, n_max + 1);
    for (std::int64_t n = n_min; n <= n_max; ++n) values.push_back(all.at(n + 1));
  } else {
    out.generator = d.braid() ? "braid" : "cabling";
    for (std::int64_t n = n_min; n <= n_max; ++n)
      values.push_back(normalized_colored_jones_auto(d, static_cast<int>(n + 1)));
  }
  if (flip)
    for (auto& v : values) v = v.mirrored();
  StabilityReport rep = zero_stable_limit(values, n_min, true);
  out.computed = rep.phi0();
  out.checked_to = std::min(rep.verified_to(), Rational(big(t)));

  if (column == TableColumn::Mirror || row.plain) {
    const auto& bs = column == TableColumn::Mirror ? row.mirror : *row.plain;
    out.expected_label = label(bs);
    out.expected = h_product(bs, trunc);
  } else {
    // The table leaves this entry open; compare with the Nahm sum instead.
    out.expected_label = "unidentified";
    if (knot == "8_5") out.expected = phi_85(trunc, data_dir).phi;
  }
  if (out.expected) {
    auto cmp = compare(out.computed.truncated(out.checked_to), *out.expected);
    out.match = cmp.equal && out.checked_to >= Rational(big(t));
  }
  return out;
}

}  // namespace qknot
