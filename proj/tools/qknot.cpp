#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qknot/asymptotics.hpp"
#include "qknot/guesser.hpp"
#include "qknot/holonomic.hpp"
#include "qknot/knot_diagram.hpp"
#include "qknot/modarith.hpp"
#include "qknot/nahm.hpp"
#include "qknot/stability.hpp"

namespace fs = std::filesystem;
using namespace qknot;

namespace {

struct Config {
  int prec = 256;
  std::string trunc = "40";
  int width_budget = 14;
  int shells = 1;
  std::uint64_t budget = 4000000000ULL;
  std::string data;
  std::string format = "text";

  bool machine() const { return format == "machine"; }
  fs::path data_dir() const { return data.empty() ? default_data_dir() : fs::path(data); }
  Rational truncation() const {
    Rational t = parse_rational(trunc);
    if (t <= 0) fail(ErrorKind::InvalidInput, "--trunc must be positive");
    return t;
  }
  BracketOptions bracket() const {
    if (width_budget <= 0) fail(ErrorKind::InvalidInput, "--width-budget must be positive");
    return {width_budget};
  }
};

int digits_for(int prec) { return std::max(5, static_cast<int>(prec * 0.30103) - 2); }

std::string exponent_text(const Rational& e) {
  std::string s = to_string(e);
  return s.find('/') == std::string::npos ? s : "{" + s + "}";
}

std::string series_text(const TruncatedSeries& s) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < s.raw().size(); ++i) {
    const BigInt& c = s.raw()[i];
    if (c == 0) continue;
    const Rational e(big(s.lo_num() + static_cast<std::int64_t>(i)), big(s.den()));
    BigInt mag = abs(c);
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    if (e == 0) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str();
      os << "q";
      if (e != 1) os << "^" << exponent_text(e);
    }
    first = false;
  }
  os << (first ? "" : " + ") << "O(q^" << exponent_text(s.trunc_order()) << ")";
  return os.str();
}

void print_series(const Config& cfg, const std::string& key, const TruncatedSeries& s) {
  if (cfg.machine()) {
    std::cout << key << "_trunc " << to_string(s.trunc_order()) << "\n";
    for (std::size_t i = 0; i < s.raw().size(); ++i) {
      if (s.raw()[i] == 0) continue;
      const Rational e(big(s.lo_num() + static_cast<std::int64_t>(i)), big(s.den()));
      std::cout << key << "_coeff " << to_string(e) << " " << s.raw()[i].get_str() << "\n";
    }
  } else {
    std::cout << key << " = " << series_text(s) << "\n";
  }
}

void print_value(const Config& cfg, const std::string& key, const std::string& value) {
  std::cout << key << (cfg.machine() ? " " : ": ") << value << "\n";
}

void print_complex(const Config& cfg, const std::string& key, const MPComplex& z) {
  const int digits = digits_for(z.prec());
  if (cfg.machine())
    std::cout << key << " " << z.re().to_string(digits) << " " << z.im().to_string(digits) << " " << z.prec() << "\n";
  else
    std::cout << key << " = " << z.re().to_string(digits) << " + (" << z.im().to_string(digits) << ") i\n";
}

void print_real(const Config& cfg, const std::string& key, const MPReal& x) {
  print_complex(cfg, key, real_to_complex(x));
}

std::string fixed(double v, int decimals = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(decimals);
  os << v;
  return os.str();
}

KnotDiagram load_diagram(const fs::path& path) {
  try {
    return KnotDiagram::load(path);
  } catch (const Error& e) {
    const std::string what = e.what();
    if (e.kind() == ErrorKind::InvalidInput && what.rfind("invalid diagram", 0) != 0)
      fail(ErrorKind::InvalidInput, "invalid diagram: " + what);
    throw;
  }
}

// rec_<name>.rec -> <name>
std::string knot_name_of(const fs::path& rec) {
  std::string stem = rec.stem().string();
  return stem.rfind("rec_", 0) == 0 ? stem.substr(4) : stem;
}

fs::path default_knot_for(const fs::path& rec) { return rec.parent_path() / (knot_name_of(rec) + ".pd"); }

Sequence initial_values(const RecurrenceOperator& rec, const KnotDiagram& d, const Config& cfg, int count = 0) {
  Sequence s;
  s.first = 1;
  const int n = std::max(count, rec.order());
  for (int N = 1; N <= n; ++N) s.values.push_back(normalized_colored_jones_auto(d, N, cfg.bracket()));
  return s;
}

std::pair<std::int64_t, std::int64_t> parse_fraction(const std::string& text) {
  Rational r = parse_rational(text);
  if (!r.get_num().fits_slong_p() || !r.get_den().fits_slong_p()) fail(ErrorKind::InvalidInput, "fraction too large");
  return {r.get_num().get_si(), r.get_den().get_si()};
}

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidInput, "bad list entry '" + item + "'");
    }
  }
  if (out.empty()) fail(ErrorKind::InvalidInput, "empty list");
  return out;
}

// ---------------------------------------------------------------------------

int cmd_jones(const Config& cfg, const std::string& file) {
  const LaurentPoly j = jones(load_diagram(file), cfg.bracket());
  if (cfg.machine())
    print_value(cfg, "jones", j.to_string());
  else
    std::cout << j.to_string() << "\n";
  return 0;
}

int cmd_cjones(const Config& cfg, const std::string& file, int N, bool normalized, const std::string& engine) {
  if (N < 1) fail(ErrorKind::InvalidInput, "N must be positive");
  const KnotDiagram d = load_diagram(file);
  LaurentPoly v;
  if (engine == "cabling") {
    v = normalized_colored_jones(d, N, cfg.bracket());
  } else if (engine == "braid") {
    if (!d.braid()) fail(ErrorKind::InvalidInput, "the diagram carries no braid word");
    v = normalized_colored_jones_braid(*d.braid(), N);
  } else {
    v = normalized_colored_jones_auto(d, N, cfg.bracket());
  }
  if (!normalized) v = v * quantum_integer(N);
  if (cfg.machine())
    print_value(cfg, normalized ? "normalized_colored_jones" : "colored_jones", v.to_string());
  else
    std::cout << v.to_string() << "\n";
  return 0;
}

int cmd_kashaev(const Config& cfg, const std::string& rec_file, const std::string& root, std::int64_t N,
                const std::string& knot_file) {
  const RecurrenceOperator rec = RecurrenceOperator::load(rec_file);
  const KnotDiagram d = load_diagram(knot_file.empty() ? default_knot_for(rec_file) : fs::path(knot_file));
  const auto [a, c] = parse_fraction(root);
  if (N < 1) fail(ErrorKind::InvalidInput, "N must be positive");
  const RootValue v = eval_at_root(rec, a, c, initial_values(rec, d, cfg), N, cfg.prec);
  print_complex(cfg, "value", v.value);
  print_value(cfg, "error_bits", fixed(v.error_bits, 1));
  print_value(cfg, "degenerate_steps", std::to_string(v.degenerate_steps));
  return 0;
}

int cmd_recur_verify(const Config& cfg, const std::string& rec_file, const std::string& knot_file, int n_max) {
  const RecurrenceOperator rec = RecurrenceOperator::load(rec_file);
  const KnotDiagram d = load_diagram(knot_file);
  if (n_max <= 0) n_max = rec.order() + 2;
  Sequence seq = initial_values(rec, d, cfg, n_max);
  seq.values.resize(static_cast<std::size_t>(n_max));
  const VerifyReport r = verify_report(rec, seq);
  print_value(cfg, "checked", std::to_string(r.checked));
  if (r.ok) {
    std::cout << "OK\n";
    return 0;
  }
  print_value(cfg, "first_bad", std::to_string(*r.first_bad));
  std::cout << "FAIL\n";
  return 5;
}

int cmd_recur_apply(const Config& cfg, const std::string& rec_file, const std::string& knot_file, int n_max) {
  const RecurrenceOperator rec = RecurrenceOperator::load(rec_file);
  const KnotDiagram d = load_diagram(knot_file.empty() ? default_knot_for(rec_file) : fs::path(knot_file));
  if (n_max < 1) fail(ErrorKind::InvalidInput, "--nmax must be positive");
  const Sequence all = apply(rec, initial_values(rec, d, cfg), n_max);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    if (cfg.machine())
      std::cout << "value " << n << " " << all.at(n).to_string() << "\n";
    else
      std::cout << n << ": " << all.at(n).to_string() << "\n";
  }
  return 0;
}

struct GuessArgs {
  int n_max = 7, order = 2, holdout = 1, primes = 30;
  std::int64_t u_max = 7, q_min = -1, q_max = 2;
  bool band = false, inhomogeneous = false;
  std::string like;
};

int cmd_recur_guess(const Config& cfg, const std::string& knot_file, const GuessArgs& g) {
  const KnotDiagram d = load_diagram(knot_file);
  Sequence seq;
  seq.first = 1;
  for (int N = 1; N <= g.n_max; ++N) seq.values.push_back(normalized_colored_jones_auto(d, N, cfg.bracket()));
  Ansatz an;
  if (!g.like.empty()) {
    an = Ansatz::from_operator(RecurrenceOperator::load(g.like));
  } else if (g.band) {
    an.order = g.order;
    an.inhomogeneous = g.inhomogeneous;
    std::set<BivariatePoly::Key> band;
    for (std::int64_t u = 0; u <= g.u_max; ++u)
      for (std::int64_t q = u + g.q_min; q <= u + g.q_max; ++q) band.insert({u, q});
    an.support.assign(static_cast<std::size_t>(g.order) + 2, band);
  } else {
    an = Ansatz::box(g.order, g.u_max, g.q_max, g.inhomogeneous);
    an.q_min = g.q_min;
  }
  const auto& primes = word_primes(static_cast<std::size_t>(g.primes));
  const GuessResult r = guess_recursion(seq, an, primes, g.holdout);
  print_value(cfg, "unknowns", std::to_string(r.diagnostics.unknowns));
  print_value(cfg, "equations", std::to_string(r.diagnostics.equations));
  print_value(cfg, "primes_used", std::to_string(r.diagnostics.primes.size()));
  if (!r.op) {
    print_value(cfg, "no_operator", r.reason);
    return 5;
  }
  std::cout << r.op->serialize();
  return 0;
}

int cmd_recur_q1(const Config& cfg, const std::string& rec_file) {
  const MLPoly p = specialize_q1(RecurrenceOperator::load(rec_file));
  if (cfg.machine())
    print_value(cfg, "q1", p.to_string());
  else
    std::cout << p.to_string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct NahmArgs {
  std::int64_t radius = 0;
  bool quotient = false;
  std::string expect;
  std::optional<int> expect_qinf;
  bool no_regularity = false;
};

int cmd_nahm_eval(const Config& cfg, const std::string& file, const NahmArgs& a) {
  const NahmDatum d = NahmDatum::load(file);
  NahmOptions opts;
  opts.radius = a.radius;
  opts.node_budget = cfg.budget;
  opts.check_regularity = !a.no_regularity;
  const Rational t = cfg.truncation();
  NahmEvaluation ev = evaluate(d, t, opts);
  TruncatedSeries s = ev.series;
  if (a.quotient) s = (s / q_infty(t)).truncated(t);
  print_series(cfg, a.quotient ? "quotient" : "series", s);
  print_value(cfg, "radius", std::to_string(ev.radius));
  print_value(cfg, "points", std::to_string(ev.points));
  if (!a.expect.empty() || a.expect_qinf) {
    TruncatedSeries want;
    if (a.expect_qinf) {
      want = q_infty(t).ipow(*a.expect_qinf);
    } else {
      std::ifstream f(a.expect);
      if (!f) fail(ErrorKind::InvalidInput, "cannot open " + a.expect);
      std::stringstream ss;
      ss << f.rdbuf();
      want = TruncatedSeries::deserialize(ss.str());
    }
    const SeriesComparison c = compare(s, want);
    print_value(cfg, "compared_to", to_string(c.checked_to));
    if (!c.equal) {
      std::cout << "MISMATCH at q^" << to_string(c.first_mismatch) << "\n";
      return 5;
    }
    std::cout << "MATCH\n";
  }
  return 0;
}

int cmd_nahm_check(const Config& cfg, const std::string& file) {
  const NahmDatum d = NahmDatum::load(file);
  d.validate();
  const RegularityReport r = regularity_check(d);
  for (const auto& ray : r.rays) {
    std::string s;
    for (const auto& x : ray) s += (s.empty() ? "" : " ") + to_string(x);
    print_value(cfg, "ray", s);
  }
  if (r.regular) {
    std::cout << "regular\n";
    return 0;
  }
  std::string w;
  for (const auto& x : r.witness) w += (w.empty() ? "" : " ") + to_string(x);
  print_value(cfg, "reason", r.reason);
  if (!w.empty()) print_value(cfg, "witness", w);
  std::cout << "irregular\n";
  return 5;
}

// ---------------------------------------------------------------------------

struct StabilityArgs {
  std::int64_t n_max = 0;
  bool mirror = false;
  std::string rec;
  std::string column = "mirror";
  bool diagram_only = false;
};

// J^+_n for the source: "6j" or a PD file.
SeriesSequence stability_source(const Config& cfg, const std::string& source, const StabilityArgs& a, bool shells) {
  const Rational t = cfg.truncation();
  if (source == "6j") {
    const std::int64_t n_max = a.n_max > 0 ? a.n_max : 60;
    SeriesSequence s;
    // Shells are indexed by x = q^{N+1}: f_n = J^+_{n-1}.
    s.first = shells ? 1 : 0;
    for (std::int64_t N = 0; N <= n_max; ++N) s.terms.push_back(six_j_plus_truncated(N, t));
    return s;
  }
  const KnotDiagram d = load_diagram(source);
  const std::int64_t trunc_int = static_cast<std::int64_t>(std::ceil(t.get_d()));
  const std::int64_t n_max = a.n_max > 0 ? a.n_max : trunc_int + 3;
  const std::int64_t n_min = std::max<std::int64_t>(0, n_max - 6);
  std::vector<LaurentPoly> values;
  if (!a.rec.empty()) {
    const RecurrenceOperator rec = RecurrenceOperator::load(a.rec);
    const Sequence all = apply(rec, initial_values(rec, d, cfg), n_max + 1);
    for (std::int64_t n = n_min; n <= n_max; ++n) values.push_back(all.at(n + 1));
  } else {
    for (std::int64_t n = n_min; n <= n_max; ++n)
      values.push_back(normalized_colored_jones_auto(d, static_cast<int>(n + 1), cfg.bracket()));
  }
  if (a.mirror)
    for (auto& v : values) v = v.mirrored();
  return polynomial_sequence(values, n_min, true);
}

void print_shell(const Config& cfg, int k, const StabilityShell& sh) {
  const std::string key = "phi" + std::to_string(k);
  print_series(cfg, key, sh.phi);
  print_value(cfg, key + "_verified_to", to_string(sh.verified_to));
  std::string w;
  for (std::size_t i = 0; i < sh.witness.size(); ++i)
    w += (i ? " " : "") + std::to_string(sh.witness[i]);
  print_value(cfg, key + "_witness_from_" + std::to_string(sh.m_lo), w);
}

int cmd_stability_limit(const Config& cfg, const std::string& source, const StabilityArgs& a) {
  const SeriesSequence seq = stability_source(cfg, source, a, false);
  const StabilityReport r = zero_stable_limit(seq);
  print_value(cfg, "window", std::to_string(seq.first) + ".." + std::to_string(seq.last()));
  print_shell(cfg, 0, r.shells[0]);
  return 0;
}

int cmd_stability_shells(const Config& cfg, const std::string& source, const StabilityArgs& a) {
  if (cfg.shells < 0) fail(ErrorKind::InvalidInput, "--shells must be nonnegative");
  const SeriesSequence seq = stability_source(cfg, source, a, true);
  const StabilityReport r = stable_shells(seq, cfg.shells);
  print_value(cfg, "window", std::to_string(seq.first) + ".." + std::to_string(seq.last()));
  for (std::size_t k = 0; k < r.shells.size(); ++k) print_shell(cfg, static_cast<int>(k), r.shells[k]);
  if (auto bad = shell_residual_violation(seq, r)) {
    print_value(cfg, "residual_violation_at", std::to_string(*bad));
    return 5;
  }
  return 0;
}

int cmd_stability_table(const Config& cfg, const std::string& knot, const StabilityArgs& a) {
  TableColumn col;
  if (a.column == "mirror")
    col = TableColumn::Mirror;
  else if (a.column == "plain")
    col = TableColumn::Plain;
  else
    fail(ErrorKind::InvalidInput, "--column must be plain or mirror");
  const TableMatch m = verify_table_entry(knot, col, cfg.truncation(), a.n_max, cfg.data_dir(),
                                          a.diagram_only ? TableGenerator::Diagram : TableGenerator::Auto);
  if (!m.expected)
    std::cout << "UNIDENTIFIED\n";
  else if (m.match)
    std::cout << "MATCH " << (m.expected_label == "unidentified" ? "nahm" : m.expected_label) << "\n";
  else
    std::cout << "MISMATCH " << m.expected_label << "\n";
  print_value(cfg, "generator", m.generator);
  print_value(cfg, "checked_to", to_string(m.checked_to));
  print_value(cfg, "fixture_is_mirror", m.fixture_is_mirror ? "yes" : "no");
  print_series(cfg, "computed", m.computed);
  return !m.expected || m.match ? 0 : 5;
}

// ---------------------------------------------------------------------------

struct AsymArgs {
  std::string knot;
  std::int64_t n_max = 2000, step = 20;
  int samples = 7, order = 3;
  std::string alpha = "1/3";
  std::int64_t x0 = 150;
  int count = 16;
  std::string x = "20,40,60";
  std::optional<std::string> q;
  bool prec_given = false;
};

int cmd_asym_volume(const Config& cfg, const std::string& rec_file, const AsymArgs& a) {
  const RecurrenceOperator rec = RecurrenceOperator::load(rec_file);
  const KnotDiagram d = load_diagram(a.knot.empty() ? default_knot_for(rec_file) : fs::path(a.knot));
  const Sequence init = initial_values(rec, d, cfg);
  if (a.samples < a.order + 3) fail(ErrorKind::InvalidInput, "--samples must exceed --order + 2");
  std::vector<std::int64_t> ns;
  for (int i = a.samples - 1; i >= 0; --i) ns.push_back(a.n_max - a.step * i);
  if (ns.front() < 2) fail(ErrorKind::InvalidInput, "sample window reaches below N = 2");
  // Cancellation in the recursion grows linearly in N.
  const int base = a.prec_given ? cfg.prec : 700;
  const GrowthFit g = growth_fit(
      [&](std::int64_t N) { return eval_at_root_once(rec, 1, N, init, N, base + static_cast<int>(N)); }, ns, a.order);
  const int prec = 256;
  print_real(cfg, "rate", g.rate.with_prec(prec));
  print_real(cfg, "exponent", g.exponent.with_prec(prec));
  print_real(cfg, "volume", g.rate.with_prec(prec) * mul_si(MPReal::pi(prec), 2));
  print_value(cfg, "rate_stability_bits", fixed(g.rate_stability_bits, 1));
  const std::string name = knot_name_of(rec_file);
  std::optional<MPReal> ref;
  if (name == "5_2") ref = algebraic_context_52(prec).get("C").im() / mul_si(MPReal::pi(prec), 2);
  if (name == "4_1") ref = figure_eight_growth(prec);
  if (ref) {
    print_real(cfg, "reference_rate", *ref);
    print_value(cfg, "relative_error", fixed(abs((g.rate.with_prec(prec) - *ref) / *ref).to_double() * 100, 6) + "%");
  }
  return 0;
}

int cmd_asym_modfit(const Config& cfg, const std::string& rec_file, const AsymArgs& a) {
  const RecurrenceOperator rec = RecurrenceOperator::load(rec_file);
  const KnotDiagram d = load_diagram(a.knot.empty() ? default_knot_for(rec_file) : fs::path(a.knot));
  const Rational alpha = parse_rational(a.alpha);
  const auto gamma = gamma_for(alpha);
  if (a.count < a.order + 2) fail(ErrorKind::InvalidInput, "--count must be at least --order + 2");
  std::vector<std::int64_t> xs;
  for (int i = 0; i < a.count; ++i) xs.push_back(a.x0 + i);
  const int prec = cfg.prec;
  const auto ratios = modularity_samples(rec, initial_values(rec, d, cfg), gamma, xs, prec);
  print_value(cfg, "gamma", std::to_string(gamma[0]) + " " + std::to_string(gamma[1]) + " " +
                                std::to_string(gamma[2]) + " " + std::to_string(gamma[3]));
  const std::string name = knot_name_of(rec_file);
  MPComplex C(prec);
  std::optional<ExponentChoice> choice;
  std::optional<AlgebraicContext> ctx;
  if (name == "4_1" && alpha == 0) {
    C = figure_eight_modular_C(prec);
  } else {
    const MPComplex fitted = fit_exponent(gamma, xs, ratios, std::max(1, a.order - 2));
    print_complex(cfg, "C_fitted", fitted);
    C = fitted;
    if (name == "5_2" && alpha == make_rational(1, 3)) {
      ctx = algebraic_context_52(prec);
      choice = select_exponent(fitted, ctx->get("C"));
      C = choice->value;
      print_value(cfg, "C_choice", std::string(choice->conjugated ? "-conj(C)" : "C") + " + " +
                                       std::to_string(choice->shift) + " pi^2/6");
    }
  }
  print_complex(cfg, "C", C);
  const ModularityFit fit = modularity_fit(gamma, xs, ratios, C, a.order);
  for (std::size_t j = 0; j < fit.series.size(); ++j) {
    print_complex(cfg, "DeltaA" + std::to_string(j), fit.series[j].with_prec(128));
    print_value(cfg, "DeltaA" + std::to_string(j) + "_stability_bits", fixed(fit.stability[j], 1));
  }
  if (choice) {
    const AlphaThirdComparison c = compare_alpha_third(fit, *choice, *ctx);
    print_value(cfg, "phase", "e(" + std::to_string(c.phase.k) + "/" + std::to_string(c.phase.order) + ")");
    print_complex(cfg, "A0", c.a0_fit.with_prec(128));
    print_complex(cfg, "A0_printed", c.a0_printed.with_prec(128));
    print_value(cfg, "A0_digits", fixed(c.a0_digits, 1));
    print_value(cfg, "A1_raw_digits", fixed(c.a1_raw_digits, 1));
    print_complex(cfg, "A1_mapped", c.a1_mapped.with_prec(128));
    print_complex(cfg, "A1_printed", c.a1_printed.with_prec(128));
    print_value(cfg, "A1_mapped_digits", fixed(c.a1_mapped_digits, 1));
  }
  if (name == "4_1" && alpha == 0) {
    const auto ak = figure_eight_coefficients(fit);
    const FigureEightData data = load_figure_eight(cfg.data_dir() / "constants_4_1.txt");
    for (std::size_t j = 0; j < ak.size() && j < data.Ak.size(); ++j) {
      const std::string key = "A" + std::to_string(j);
      print_complex(cfg, key, ak[j].with_prec(128));
      const MPComplex ref = real_to_complex(MPReal(data.Ak[j], prec));
      print_value(cfg, key + "_digits", fixed(agreement_bits(ak[j], ref) * std::log10(2.0), 1));
    }
  }
  return 0;
}

int cmd_asym_radial(const Config& cfg, const std::string& source, const AsymArgs& a) {
  const int prec = cfg.prec;
  MPComplex q(prec);
  if (a.q) {
    q = real_to_complex(MPReal::parse(*a.q, prec));
  } else {
    const auto xs = parse_list(a.x);
    if (xs.size() != 1 || xs[0] < 1) fail(ErrorKind::InvalidInput, "--x takes one positive value here");
    q = real_to_complex(exp(-(MPReal(1.0, prec) / MPReal(big(xs[0]), prec))));
  }
  const Rational t = cfg.truncation();
  TruncatedSeries s;
  if (source == "6j") {
    s = phi_6j0(t).phi;
  } else if (fs::path(source).extension() == ".nahm") {
    NahmOptions opts;
    opts.node_budget = cfg.budget;
    s = evaluate(NahmDatum::load(source), t, opts).series;
  } else {
    std::ifstream f(source);
    if (!f) fail(ErrorKind::InvalidInput, "cannot open " + source);
    std::stringstream ss;
    ss << f.rdbuf();
    s = TruncatedSeries::deserialize(ss.str());
  }
  const RadialValue v = radial_eval(s, q, prec);
  print_complex(cfg, "value", v.value);
  print_value(cfg, "tail_bound", fixed(v.tail_bound, 20));
  if (source == "6j" && q.im().is_zero()) print_real(cfg, "direct", six_j_radial(q.re(), prec));
  return 0;
}

int cmd_asym_conj(const Config& cfg, const AsymArgs& a) {
  const FigureEightData data = load_figure_eight(cfg.data_dir() / "constants_4_1.txt");
  const auto rows = six_j_comparison(data, parse_list(a.x), cfg.prec);
  bool improving = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string x = std::to_string(rows[i].X);
    print_real(cfg, "lhs_" + x, rows[i].lhs.with_prec(64));
    print_complex(cfg, "rhs_" + x, rows[i].rhs.with_prec(64));
    print_complex(cfg, "rhs_printed_C_" + x, rows[i].rhs_printed.with_prec(64));
    print_value(cfg, "rel_" + x, fixed(rows[i].rel, 6));
    print_value(cfg, "rel_printed_C_" + x, fixed(rows[i].rel_printed, 6));
    if (i > 0 && !(rows[i].rel < rows[i - 1].rel)) improving = false;
  }
  const bool agrees = improving && rows.back().rel < 0.1;
  std::cout << (agrees ? "AGREEMENT improving with X" : "NO AGREEMENT") << "\n";
  return 0;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return 2;
    case ErrorKind::BudgetExceeded: return 3;
    case ErrorKind::Precision: return 4;
    case ErrorKind::PropertyViolation: return 5;
    case ErrorKind::Internal: return 1;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-series and colored Jones toolkit"};
  app.fallthrough();
  app.require_subcommand(1);
  Config cfg;
  auto* prec_opt = app.add_option("--prec", cfg.prec, "working precision in bits (default 256)");
  app.add_option("--trunc", cfg.trunc, "truncation order (default 40)");
  app.add_option("--width-budget", cfg.width_budget, "strand-width budget of the bracket sweep (default 14)");
  app.add_option("--shells", cfg.shells, "number of stability shells beyond Phi_0 (default 1)");
  app.add_option("--budget", cfg.budget, "node budget of the Nahm enumeration (default 4e9)");
  app.add_option("--data", cfg.data, "data directory (default $QKNOT_DATA or the shipped one)");
  app.add_option("--format", cfg.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));

  std::string file, file2, root;
  std::int64_t N = 0;
  int run_result = 0;
  std::function<int()> run;

  auto* jones_cmd = app.add_subcommand("jones", "Jones polynomial of a PD diagram");
  jones_cmd->add_option("knot", file)->required();
  jones_cmd->callback([&] { run = [&] { return cmd_jones(cfg, file); }; });

  bool normalized = false;
  std::string engine = "cabling";
  auto* cj = app.add_subcommand("cjones", "colored Jones polynomial J_{K,N}");
  cj->add_option("knot", file)->required();
  cj->add_option("N", N)->required();
  cj->add_flag("--normalized", normalized, "divide by [N]");
  cj->add_option("--engine", engine, "cabling, braid or auto")->check(CLI::IsMember({"cabling", "braid", "auto"}));
  cj->callback([&] { run = [&] { return cmd_cjones(cfg, file, static_cast<int>(N), normalized, engine); }; });

  std::string knot_opt;
  auto* ka = app.add_subcommand("kashaev", "normalized colored Jones at a root of unity via a recursion");
  ka->add_option("recursion", file)->required();
  ka->add_option("root", root, "a/c for q = e(a/c)")->required();
  ka->add_option("N", N)->required();
  ka->add_option("--knot", knot_opt, "diagram for the initial values (default <data>/<name>.pd)");
  ka->callback([&] { run = [&] { return cmd_kashaev(cfg, file, root, N, knot_opt); }; });

  auto* rc = app.add_subcommand("recur", "recursions: verify, apply, guess, q1");
  rc->require_subcommand(1);
  int n_max = 0;
  auto* rv = rc->add_subcommand("verify", "check a recursion on diagram data");
  rv->add_option("recursion", file)->required();
  rv->add_option("knot", file2)->required();
  rv->add_option("--nmax", n_max, "largest color used (default order + 2)");
  rv->callback([&] { run = [&] { return cmd_recur_verify(cfg, file, file2, n_max); }; });
  auto* ra = rc->add_subcommand("apply", "extend the initial values with a recursion");
  ra->add_option("recursion", file)->required();
  ra->add_option("--knot", knot_opt);
  ra->add_option("--nmax", n_max)->required();
  ra->callback([&] { run = [&] { return cmd_recur_apply(cfg, file, knot_opt, n_max); }; });
  GuessArgs ga;
  auto* rg = rc->add_subcommand("guess", "guess a recursion from diagram data");
  rg->add_option("knot", file)->required();
  rg->add_option("--nmax", ga.n_max, "colors 1..nmax (default 7)");
  rg->add_option("--order", ga.order);
  rg->add_option("--umax", ga.u_max);
  rg->add_option("--qmin", ga.q_min);
  rg->add_option("--qmax", ga.q_max);
  rg->add_flag("--band", ga.band, "q exponents qmin..qmax relative to the u exponent");
  rg->add_flag("--inhomogeneous", ga.inhomogeneous);
  rg->add_option("--holdout", ga.holdout, "values kept back for certification (default 1)");
  rg->add_option("--primes", ga.primes, "number of word primes (default 30)");
  rg->add_option("--like", ga.like, "use the monomial support of this recursion");
  rg->callback([&] { run = [&] { return cmd_recur_guess(cfg, file, ga); }; });
  auto* rq = rc->add_subcommand("q1", "specialize at q = 1");
  rq->add_option("recursion", file)->required();
  rq->callback([&] { run = [&] { return cmd_recur_q1(cfg, file); }; });

  auto* nc = app.add_subcommand("nahm", "generalized Nahm sums: eval, check");
  nc->require_subcommand(1);
  NahmArgs na;
  auto* ne = nc->add_subcommand("eval", "evaluate modulo q^trunc");
  ne->add_option("datum", file)->required();
  ne->add_option("--radius", na.radius, "initial coordinate cap");
  ne->add_flag("--quotient", na.quotient, "divide the result by (q)_inf");
  ne->add_option("--expect", na.expect, "compare with a series file");
  ne->add_option("--expect-qinf", na.expect_qinf, "compare with (q)_inf^k");
  ne->add_flag("--no-regularity", na.no_regularity, "skip the regularity check");
  ne->callback([&] { run = [&] { return cmd_nahm_eval(cfg, file, na); }; });
  auto* nk = nc->add_subcommand("check", "regularity of a datum");
  nk->add_option("datum", file)->required();
  nk->callback([&] { run = [&] { return cmd_nahm_check(cfg, file); }; });

  auto* sc = app.add_subcommand("stability", "stable limits: limit, shells, table");
  sc->require_subcommand(1);
  StabilityArgs sa;
  auto* sl = sc->add_subcommand("limit", "0-stable limit of J^+ (source: PD file or 6j)");
  sl->add_option("source", file)->required();
  sl->add_option("--nmax", sa.n_max);
  sl->add_flag("--mirror", sa.mirror);
  sl->add_option("--rec", sa.rec, "extend the diagram data with this recursion");
  sl->callback([&] { run = [&] { return cmd_stability_limit(cfg, file, sa); }; });
  auto* ss = sc->add_subcommand("shells", "stability shells Phi_0..Phi_k");
  ss->add_option("source", file)->required();
  ss->add_option("--nmax", sa.n_max);
  ss->add_flag("--mirror", sa.mirror);
  ss->add_option("--rec", sa.rec);
  ss->callback([&] { run = [&] { return cmd_stability_shells(cfg, file, sa); }; });
  auto* st = sc->add_subcommand("table", "compare a fixture's limit with the table of h-series");
  st->add_option("knot", file, "3_1, 4_1, 5_2, 6_3 or 8_5")->required();
  st->add_option("--column", sa.column, "mirror (default) or plain");
  st->add_option("--nmax", sa.n_max);
  st->add_flag("--diagram-only", sa.diagram_only, "do not extend with a shipped recursion");
  st->callback([&] { run = [&] { return cmd_stability_table(cfg, file, sa); }; });

  auto* ac = app.add_subcommand("asym", "asymptotics: volume, modfit, radial, conj6j41");
  ac->require_subcommand(1);
  AsymArgs aa;
  auto* av = ac->add_subcommand("volume", "growth rate of the Kashaev invariant");
  av->add_option("recursion", file)->required();
  av->add_option("--knot", aa.knot);
  av->add_option("--nmax", aa.n_max, "largest N (default 2000)");
  av->add_option("--step", aa.step, "spacing of the samples (default 20)");
  av->add_option("--samples", aa.samples, "number of samples (default 7)");
  av->add_option("--order", aa.order, "correction terms in 1/N (default 3)");
  av->callback([&] { run = [&] { return cmd_asym_volume(cfg, file, aa); }; });
  auto* am = ac->add_subcommand("modfit", "fit of phi(gamma X)/phi(X) at a rational alpha");
  am->add_option("recursion", file)->required();
  am->add_option("--knot", aa.knot);
  am->add_option("--alpha", aa.alpha, "default 1/3");
  am->add_option("--x0", aa.x0, "first X (default 150)");
  am->add_option("--count", aa.count, "number of consecutive X (default 16)");
  am->add_option("--order", aa.order, "coefficients fitted (default 3)");
  am->callback([&] { run = [&] { return cmd_asym_modfit(cfg, file, aa); }; });
  auto* ar = ac->add_subcommand("radial", "evaluate a series at q = e^{-1/X} (source: 6j, .nahm or .series)");
  ar->add_option("source", file)->required();
  ar->add_option("--x", aa.x, "X");
  ar->add_option("--q", aa.q, "a real q in (0, 1) instead of X");
  ar->callback([&] { run = [&] { return cmd_asym_radial(cfg, file, aa); }; });
  auto* a7 = ac->add_subcommand("conj6j41", "phi_6j at e^{-1/X} against the 4_1 expansion");
  a7->add_option("--x", aa.x, "comma-separated X (default 20,40,60)");
  a7->callback([&] { run = [&] { return cmd_asym_conj(cfg, aa); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  aa.prec_given = prec_opt->count() > 0;
  if (cfg.prec < 16) {
    std::cerr << "error: --prec must be at least 16\n";
    return 2;
  }
  try {
    run_result = run();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout.flush();
  return run_result;
}
