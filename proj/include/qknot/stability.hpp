#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qknot/qseries.hpp"

namespace qknot {

// f_n for n = first, first+1, ...; each term known modulo its own truncation.
struct SeriesSequence {
  std::int64_t first = 0;
  std::vector<TruncatedSeries> terms;
  std::int64_t last() const { return first + static_cast<std::int64_t>(terms.size()) - 1; }
};

// Exact polynomials as series. With `normalize`, each is divided by its lowest
// monomial and made to start with +1.
SeriesSequence polynomial_sequence(const std::vector<LaurentPoly>& polys, std::int64_t first, bool normalize);

struct StabilityShell {
  TruncatedSeries phi;                 // Phi_k, known below verified_to
  std::int64_t m_lo = 0;               // exponent of witness[0]
  std::vector<std::int64_t> witness;   // witness[i]: index past which the coefficient of q^{m_lo+i} is constant
  Rational verified_to;
};

// Stability is only ever certified on the data: a coefficient counts as stable
// when it is constant over at least max(2, ceil(W/3)) trailing known indices,
// W the window length.
struct StabilityReport {
  std::vector<StabilityShell> shells;
  const TruncatedSeries& phi0() const { return shells.at(0).phi; }
  Rational verified_to() const { return shells.at(0).verified_to; }
};

// Throws PropertyViolation "not 0-stable on window" when not even the lowest
// coefficient settles.
StabilityReport zero_stable_limit(const SeriesSequence& seq);
StabilityReport zero_stable_limit(const std::vector<LaurentPoly>& seq, std::int64_t first, bool normalize);

// Phi_0..Phi_{k_max}: Phi_k is the 0-stable limit of q^{-kn}(f_n - sum_{j<k} q^{jn} Phi_j).
StabilityReport stable_shells(const SeriesSequence& seq, int k_max);

// First index n at which f_n - sum_{j<=k} q^{jn} Phi_j has a known nonzero
// coefficient at an exponent <= k n, among n past the largest witness.
std::optional<std::int64_t> shell_residual_violation(const SeriesSequence& seq, const StabilityReport& rep);

// Rows of the table of limits, for the shipped fixtures. Columns are named as
// in the table: Plain is Phi_{K,0}, Mirror is Phi_{-K,0}.
enum class TableColumn { Plain, Mirror };

struct TableMatch {
  std::string knot;
  TableColumn column = TableColumn::Plain;
  std::string expected_label;             // e.g. "h_3^2", or "unidentified"
  std::optional<TruncatedSeries> expected;
  TruncatedSeries computed;               // 0-stable limit from the data
  Rational checked_to;
  bool match = false;                     // for an unidentified entry: agreement with the Nahm sum, if compared
  bool fixture_is_mirror = false;         // the shipped diagram is -K for the table's K
  std::string generator;                  // "braid", "cabling" or "recursion"
};

// Where the colored Jones data come from: Auto extends the diagram's first
// values with data/rec_<knot>.rec when that file exists.
enum class TableGenerator { Auto, Diagram };

// J^+_{K,n} = J_{K,n+1} divided by its lowest monomial, for n in a window
// ending at n_max (n_max = 0 picks one from trunc). Throws InvalidInput
// "no generator available".
TableMatch verify_table_entry(const std::string& knot, TableColumn column, const Rational& trunc,
                              std::int64_t n_max = 0, const std::filesystem::path& data_dir = default_data_dir(),
                              TableGenerator generator = TableGenerator::Auto);

// prod_i h_{b_i} modulo q^trunc.
TruncatedSeries h_product(const std::vector<std::int64_t>& bs, const Rational& trunc);

}  // namespace qknot
