#include "qknot/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <limits>
#include <map>
#include <mutex>

namespace qknot {

namespace {

MPComplex one(int prec) { return MPComplex(1.0, 0.0, prec); }
MPReal pi2_over_6(int prec) {
  MPReal p = MPReal::pi(prec);
  return div_si(p * p, 6);
}

// Bernoulli numbers B_0..B_n (B_1 = -1/2), cached.
const std::vector<Rational>& bernoulli(std::size_t n) {
  static std::mutex mu;
  static std::vector<Rational> b;
  std::lock_guard lock(mu);
  while (b.size() <= n) {
    const std::size_t m = b.size();
    if (m == 0) {
      b.emplace_back(1);
      continue;
    }
    // sum_{k=0}^{m} binom(m+1, k) B_k = 0
    Rational s = 0;
    BigInt binom = 1;  // binom(m+1, k)
    for (std::size_t k = 0; k < m; ++k) {
      s += Rational(binom) * b[k];
      binom = binom * BigInt(static_cast<unsigned long>(m + 1 - k)) / BigInt(static_cast<unsigned long>(k + 1));
    }
    Rational bm = -s / Rational(BigInt(static_cast<unsigned long>(m + 1)));
    bm.canonicalize();
    b.push_back(bm);
  }
  return b;
}

MPComplex dilog_power_series(const MPComplex& z, int prec) {
  // sum z^k / k^2, |z| <= 1/2 in practice.
  MPComplex sum(prec), term = z;
  const double lz = log2_abs(abs(z));
  for (long k = 1;; ++k) {
    MPComplex t = term;
    t *= div_si(MPReal(1.0, prec), k * k);
    sum += t;
    if (lz * static_cast<double>(k) - 2 * std::log2(static_cast<double>(k)) < -prec - 10) break;
    if (k > 100000) fail(ErrorKind::Precision, "dilog series does not converge");
    term *= z;
  }
  return sum;
}

MPComplex dilog_bernoulli(const MPComplex& z, int prec) {
  // Li_2(z) = sum_n B_n w^{n+1}/(n+1)!, w = -log(1-z), |w| < 2 pi.
  MPComplex w = -log(one(prec) - z);
  const double lw = log2_abs(abs(w)) - std::log2(2 * M_PI);
  if (lw >= -0.05) fail(ErrorKind::Precision, "dilog expansion point outside its disk");
  MPComplex sum(prec), wp = w;  // w^{n+1}
  MPReal fact(1.0, prec);       // (n+1)!
  for (std::size_t n = 0;; ++n) {
    const auto& B = bernoulli(n);
    if (B[n] != 0) {
      MPComplex t = wp;
      t *= MPReal(B[n], prec) / fact;
      sum += t;
    }
    if (n > 4 && lw * static_cast<double>(n) < -prec - 10) break;
    wp *= w;
    fact = mul_si(fact, static_cast<long>(n + 2));
  }
  return sum;
}

}  // namespace

MPComplex dilog_series(const MPComplex& z) {
  if (!(abs(z).to_double() < 1)) fail(ErrorKind::InvalidInput, "dilog_series needs |z| < 1");
  return dilog_power_series(z, z.prec());
}

MPComplex dilog(const MPComplex& z, int side) {
  const int prec = z.prec();
  const int wp = prec + 32;
  MPComplex x = z.with_prec(wp);
  if (x.is_zero()) return MPComplex(prec);
  const double az = abs(x).to_double();
  const double a1 = abs(one(wp) - x).to_double();
  MPComplex r(wp);
  if (x.im().is_zero() && x.re().to_double() > 1) {
    if (side == 0) fail(ErrorKind::InvalidInput, "dilog on the branch cut needs a side");
    // Li_2(x +- i0) = pi^2/3 - log(x)^2/2 - Li_2(1/x) +- i pi log x
    const MPReal lx = log(x.re());
    MPComplex inv = dilog(one(wp) / x);
    MPReal re = mul_si(pi2_over_6(wp), 2) - div_si(lx * lx, 2) - inv.re();
    MPReal im = mul_si(MPReal::pi(wp) * lx, side);
    return MPComplex(re, im).with_prec(prec);
  }
  if (a1 == 0) {
    r = real_to_complex(pi2_over_6(wp));
  } else if (az <= 0.5) {
    r = dilog_power_series(x, wp);
  } else if (a1 <= 0.5) {
    // Li_2(z) = pi^2/6 - log z log(1-z) - Li_2(1-z)
    MPComplex y = one(wp) - x;
    r = real_to_complex(pi2_over_6(wp)) - log(x) * log(y) - dilog_power_series(y, wp);
  } else if (az >= 2) {
    // Li_2(z) = -Li_2(1/z) - pi^2/6 - log(-z)^2/2, z not in [0, 1]
    MPComplex lz = log(-x);
    r = -dilog_power_series(one(wp) / x, wp) - real_to_complex(pi2_over_6(wp)) - lz * lz * MPReal(0.5, wp);
  } else {
    r = dilog_bernoulli(x, wp);
  }
  return r.with_prec(prec);
}

MPComplex rogers_R(const MPComplex& x) {
  const int prec = x.prec();
  if (x.is_zero()) return real_to_complex(-pi2_over_6(prec));
  MPComplex y = one(prec) - x;
  MPComplex r = dilog(x) - real_to_complex(pi2_over_6(prec));
  if (!y.is_zero()) r += log(x) * log(y) * MPReal(0.5, prec);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// Solves sum_j M[i][j] c_j = v_i (square, real matrix, complex right side).
std::vector<MPComplex> solve(std::vector<std::vector<MPReal>> M, std::vector<MPComplex> v) {
  const std::size_t n = v.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs(M[r][col]) > abs(M[piv][col])) piv = r;
    std::swap(M[col], M[piv]);
    std::swap(v[col], v[piv]);
    if (M[col][col].is_zero()) fail(ErrorKind::Precision, "singular interpolation system");
    for (std::size_t r = col + 1; r < n; ++r) {
      MPReal f = M[r][col] / M[col][col];
      for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
      v[r] -= v[col] * f;
    }
  }
  std::vector<MPComplex> x(n, MPComplex(v[0].prec()));
  for (std::size_t r = n; r-- > 0;) {
    MPComplex s = v[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= x[c] * M[r][c];
    x[r] = s * (MPReal(1.0, M[r][r].prec()) / M[r][r]);
  }
  return x;
}

std::vector<MPComplex> fit_window(const std::vector<MPReal>& ns, const std::vector<MPComplex>& values, std::size_t end,
                                  int k) {
  const std::size_t m = static_cast<std::size_t>(k) + 1;
  std::vector<std::vector<MPReal>> M;
  std::vector<MPComplex> v;
  for (std::size_t i = end - m; i < end; ++i) {
    const int prec = values[i].prec() + 32;
    MPReal t = MPReal(1.0, prec) / ns[i].with_prec(prec);
    std::vector<MPReal> row;
    MPReal p(1.0, prec);
    for (std::size_t j = 0; j < m; ++j) {
      row.push_back(p);
      p *= t;
    }
    M.push_back(std::move(row));
    v.push_back(values[i].with_prec(prec));
  }
  return solve(std::move(M), std::move(v));
}

}  // namespace

Acceleration accelerate(const std::vector<MPReal>& ns, const std::vector<MPComplex>& values, int k) {
  if (ns.size() != values.size()) fail(ErrorKind::InvalidInput, "accelerate: size mismatch");
  if (k < 0 || values.size() < static_cast<std::size_t>(k) + 1) fail(ErrorKind::InvalidInput, "window too short");
  Acceleration out;
  out.coeffs = fit_window(ns, values, values.size(), k);
  if (values.size() >= static_cast<std::size_t>(k) + 2) {
    auto alt = fit_window(ns, values, values.size() - 1, k);
    for (int j = 0; j <= k; ++j) out.stability.push_back(agreement_bits(alt[static_cast<std::size_t>(j)], out.coeffs[static_cast<std::size_t>(j)]));
  } else {
    out.stability.assign(static_cast<std::size_t>(k) + 1, 0.0);
  }
  for (auto& c : out.coeffs) c = c.with_prec(values.back().prec());
  return out;
}

namespace {

std::pair<MPReal, MPReal> growth_window(const std::vector<std::int64_t>& ns, const std::vector<MPReal>& logs,
                                        std::size_t end, int k) {
  // Unknowns: C, beta, c_0..c_k.
  const std::size_t m = static_cast<std::size_t>(k) + 3;
  std::vector<std::vector<MPReal>> M;
  std::vector<MPComplex> v;
  for (std::size_t i = end - m; i < end; ++i) {
    const int prec = logs[i].prec() + 32;
    MPReal n(big(ns[i]), prec);
    std::vector<MPReal> row{n, log(n)};
    MPReal p(1.0, prec), t = MPReal(1.0, prec) / n;
    for (int j = 0; j <= k; ++j) {
      row.push_back(p);
      p *= t;
    }
    M.push_back(std::move(row));
    v.push_back(real_to_complex(logs[i].with_prec(prec)));
  }
  auto x = solve(std::move(M), std::move(v));
  return {x[0].re(), x[1].re()};
}

}  // namespace

GrowthFit growth_fit(const std::vector<std::int64_t>& ns, const std::vector<MPComplex>& values, int k) {
  if (ns.size() != values.size() || ns.size() < static_cast<std::size_t>(k) + 3)
    fail(ErrorKind::InvalidInput, "window too short");
  std::vector<MPReal> logs;
  for (const auto& v : values) {
    if (v.is_zero()) fail(ErrorKind::Precision, "zero value in growth fit");
    logs.push_back(log(abs(v)));
  }
  auto [c, beta] = growth_window(ns, logs, ns.size(), k);
  GrowthFit g{c, beta, 0.0, 0.0};
  if (ns.size() >= static_cast<std::size_t>(k) + 4) {
    auto [c2, beta2] = growth_window(ns, logs, ns.size() - 1, k);
    g.rate_stability_bits = agreement_bits(real_to_complex(c2), real_to_complex(c));
    g.exponent_stability_bits = agreement_bits(real_to_complex(beta2), real_to_complex(beta));
  }
  return g;
}

GrowthFit growth_fit(const std::function<MPComplex(std::int64_t)>& evaluator, const std::vector<std::int64_t>& ns, int k) {
  std::vector<MPComplex> v;
  for (std::int64_t n : ns) v.push_back(evaluator(n));
  return growth_fit(ns, v, k);
}

// ---------------------------------------------------------------------------

namespace {

// (2 pi / h)^{3/2} e^{C/h} with h = 2 pi i / x.
MPComplex leading_factor(const MPReal& x, const MPComplex& C) {
  const int prec = x.prec();
  MPComplex two_pi_over_h = MPComplex(MPReal(prec), -x);  // x / i
  MPComplex f = pow(two_pi_over_h, MPComplex(MPReal(1.5, prec), MPReal(prec)));
  MPComplex c_over_h = C * MPComplex(MPReal(prec), -x) * (MPReal(1.0, prec) / mul_si(MPReal::pi(prec), 2));
  return f * exp(c_over_h);
}

MPReal shifted_x(std::int64_t X, const std::array<std::int64_t, 4>& gamma, int prec) {
  return MPReal(big(X), prec) + MPReal(make_rational(gamma[3], gamma[2]), prec);
}

}  // namespace

ModularityFit modularity_fit(const std::array<std::int64_t, 4>& gamma, const std::vector<std::int64_t>& xs,
                             const std::vector<MPComplex>& ratios, const MPComplex& C, int order) {
  if (gamma[0] * gamma[3] - gamma[1] * gamma[2] != 1) fail(ErrorKind::InvalidInput, "gamma must have determinant 1");
  if (gamma[2] <= 0) fail(ErrorKind::InvalidInput, "gamma needs c > 0");
  if (xs.size() != ratios.size()) fail(ErrorKind::InvalidInput, "modularity_fit: size mismatch");
  ModularityFit fit;
  fit.gamma = gamma;
  fit.alpha = make_rational(gamma[0], gamma[2]);
  fit.C = C;
  std::vector<MPReal> ns;
  std::vector<MPComplex> g;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const int prec = ratios[i].prec();
    MPReal x = shifted_x(xs[i], gamma, prec);
    g.push_back(ratios[i] / leading_factor(x, C.with_prec(prec)));
    ns.push_back(x);
  }
  Acceleration acc = accelerate(ns, g, order);
  // g ~ sum_j Delta A_j h^j = sum_j Delta A_j (2 pi i)^j x^{-j}
  const int prec = ratios.back().prec();
  MPComplex two_pi_i = MPComplex(MPReal(prec), mul_si(MPReal::pi(prec), 2));
  MPComplex scale = one(prec);
  for (int j = 0; j <= order; ++j) {
    fit.series.push_back(acc.coeffs[static_cast<std::size_t>(j)] / scale);
    scale *= two_pi_i;
  }
  fit.stability = acc.stability;
  fit.delta_times_a0 = fit.series[0];
  return fit;
}

MPComplex fit_exponent(const std::array<std::int64_t, 4>& gamma, const std::vector<std::int64_t>& xs,
                       const std::vector<MPComplex>& ratios, int order) {
  // Imaginary part from the growth of |ratio| x^{-3/2}; real part from the phase
  // increments between consecutive x, which must be spaced by 1.
  const std::size_t n = xs.size();
  if (n < static_cast<std::size_t>(order) + 3) fail(ErrorKind::InvalidInput, "window too short");
  const int prec = ratios.back().prec();
  std::vector<MPReal> xsr;
  std::vector<MPComplex> logabs, dphase;
  std::vector<MPReal> xmid;
  for (std::size_t i = 0; i < n; ++i) {
    MPReal x = shifted_x(xs[i], gamma, prec);
    logabs.push_back(real_to_complex(log(abs(ratios[i])) - mul_si(log(x), 3) * MPReal(0.5, prec)));
    xsr.push_back(x);
    if (i > 0) {
      if (xs[i] != xs[i - 1] + 1) fail(ErrorKind::InvalidInput, "fit_exponent needs consecutive X");
      MPComplex q = ratios[i] / ratios[i - 1];
      dphase.push_back(real_to_complex(arg(q)));
      xmid.push_back(x);
    }
  }
  // log|g| = Im(C) x / (2 pi) + const + O(1/x): fit with a linear term.
  std::vector<MPReal> ns;
  std::vector<MPComplex> slopes;
  for (std::size_t i = 1; i < n; ++i) {
    ns.push_back(xsr[i]);
    slopes.push_back(logabs[i] - logabs[i - 1]);
  }
  Acceleration a1 = accelerate(ns, slopes, order);
  Acceleration a2 = accelerate(xmid, dphase, order);
  MPReal two_pi = mul_si(MPReal::pi(prec), 2);
  // arg increments: -Re(C)/(2 pi) per unit step, modulo 2 pi (plus the x^{3/2} phase, constant).
  MPReal re = -a2.coeffs[0].re() * two_pi;
  MPReal im = a1.coeffs[0].re() * two_pi;
  return MPComplex(re, im);
}

// ---------------------------------------------------------------------------

RadialValue radial_eval(const TruncatedSeries& s, const MPComplex& q, int prec_bits) {
  const double aq = abs(q).to_double();
  if (!(aq < 1)) fail(ErrorKind::InvalidInput, "radial_eval needs |q| < 1");
  if (s.den() != 1) fail(ErrorKind::InvalidInput, "radial_eval needs integral exponents");
  const std::int64_t lo = s.lo_num(), T = s.trunc_num();
  MPComplex qq = q.with_prec(prec_bits);
  MPComplex sum(prec_bits);
  MPComplex p = pow(qq, static_cast<long>(lo));
  const auto& c = s.raw();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0) sum += p * MPReal(c[i], prec_bits);
    p *= qq;
  }
  // Envelope: log|c_k| <= a + b k fitted through the maxima of the last two quarters.
  const std::size_t len = c.size();
  double tail = 0;
  if (len >= 8) {
    auto maxlog = [&](std::size_t from, std::size_t to) {
      double m = 0;
      for (std::size_t i = from; i < to; ++i)
        if (c[i] != 0) m = std::max(m, std::log(std::fabs(c[i].get_d())));
      return m;
    };
    const std::size_t q1 = len / 2, q2 = 3 * len / 4;
    const double m1 = maxlog(q1, q2), m2 = maxlog(q2, len);
    const double slope = std::max(0.0, (m2 - m1) / static_cast<double>(q2 - q1)) * 1.5;  // generous
    const double ratio = std::exp(slope) * aq;
    if (ratio >= 1) {
      tail = std::numeric_limits<double>::infinity();
    } else {
      tail = std::exp(m2 + static_cast<double>(T) * std::log(aq)) / (1 - ratio);
    }
  } else {
    tail = std::numeric_limits<double>::infinity();
  }
  return {sum, tail};
}

// ---------------------------------------------------------------------------

const MPComplex& AlgebraicContext::get(const std::string& name) const {
  for (const auto& [n, v] : constants)
    if (n == name) return v;
  fail(ErrorKind::InvalidInput, "unknown constant " + name);
}

AlgebraicContext algebraic_context_52(int prec_bits) {
  const int p = prec_bits;
  AlgebraicContext ctx;
  ctx.minimal_polynomial = "x^3-x^2+1";
  // Newton iteration from the printed approximation 0.877 - 0.744 i.
  MPComplex a(0.877, -0.744, p);
  for (int it = 0; it < 200; ++it) {
    MPComplex f = a * a * a - a * a + one(p);
    MPComplex df = a * a * MPReal(3.0, p) - a * MPReal(2.0, p);
    MPComplex step = f / df;
    a -= step;
    if (log2_abs(abs(step)) < -p - 4) break;
  }
  ctx.root = a;
  const MPComplex z6 = MPComplex::e(make_rational(1, 6), p);
  const MPComplex pi1 = a * MPReal(3.0, p) - MPComplex(2.0, 0.0, p);
  const MPComplex pi2 = a * MPReal(3.0, p) + one(p);
  const MPComplex pi7 = (a * a - one(p)) * z6 - a + one(p);
  const MPComplex pi43 = a * a * MPReal(2.0, p) - a - z6;
  const MPReal pi = MPReal::pi(p);
  MPComplex C = rogers_R(one(p) - a * a) + rogers_R(one(p) - a) * MPReal(2.0, p) -
                MPComplex(MPReal(p), pi) * log(a) + real_to_complex(pi * pi);
  // Delta(1/3) = e(-2/9) pi_7 3 sqrt(-3) / sqrt(pi_1), principal square roots.
  MPComplex delta = MPComplex::e(make_rational(-2, 9), p) * pi7 * MPReal(3.0, p) * sqrt(MPComplex(-3.0, 0.0, p)) / sqrt(pi1);
  MPComplex a0 = pi7 * pi43;
  MPComplex num = MPComplex(-952.0, 0.0, p) + a * MPReal(321.0, p) - a * a * MPReal(873.0, p) +
                  (MPComplex(1348.0, 0.0, p) + a * MPReal(557.0, p) + a * a * MPReal(26.0, p)) * z6;
  MPComplex a1 = num / (pow(a, 5) * pow(pi1, 3));
  ctx.constants = {{"alpha", a},   {"pi1", pi1},         {"pi2", pi2},     {"pi7", pi7},  {"pi43", pi43},
                   {"zeta6", z6},  {"C", C},             {"Delta", delta}, {"A0", a0},    {"A1", a1},
                   {"pi1^2*pi2", pi1 * pi1 * pi2}};
  return ctx;
}

// ---------------------------------------------------------------------------

ExponentChoice select_exponent(const MPComplex& fitted, const MPComplex& reference) {
  const int prec = reference.prec();
  const MPReal step = div_si(MPReal::pi(prec) * MPReal::pi(prec), 6);
  ExponentChoice best;
  best.value = reference;
  best.agreement_bits = -1e9;
  for (int conj_flag = 0; conj_flag < 2; ++conj_flag) {
    const MPComplex base = conj_flag ? -conj(reference) : reference;
    for (int k = 0; k < 24; ++k) {
      MPComplex cand = base + real_to_complex(mul_si(step, k));
      // Real parts are only defined modulo 4 pi^2 = 24 * pi^2/6; bring cand next to fitted.
      const MPReal period = mul_si(step, 24);
      const double turns = std::round(((fitted.re() - cand.re()) / period).to_double());
      cand += real_to_complex(period * MPReal(turns, prec));
      const double bits = agreement_bits(fitted, cand);
      if (bits > best.agreement_bits) best = {cand, conj_flag != 0, k, bits};
    }
  }
  return best;
}

PhaseChoice match_phase(const MPComplex& value, const MPComplex& reference, int order) {
  const int prec = reference.prec();
  PhaseChoice best;
  best.order = order;
  best.agreement_bits = -1e9;
  for (int k = 0; k < order; ++k) {
    const double bits = agreement_bits(value * MPComplex::e(make_rational(k, order), prec), reference);
    if (bits > best.agreement_bits) best = {k, order, bits};
  }
  return best;
}

std::vector<MPComplex> modularity_samples(const RecurrenceOperator& rec, const Sequence& initial,
                                          const std::array<std::int64_t, 4>& gamma,
                                          const std::vector<std::int64_t>& xs, int prec_bits) {
  const auto [a, b, c, d] = gamma;
  if (a * d - b * c != 1) fail(ErrorKind::InvalidInput, "gamma must have determinant 1");
  std::vector<MPComplex> out;
  for (std::int64_t X : xs) {
    const std::int64_t num = a * X + b, den = c * X + d;
    if (den <= 0) fail(ErrorKind::InvalidInput, "gamma X must have a positive denominator");
    out.push_back(eval_at_root(rec, num, den, initial, den, prec_bits).value);
  }
  return out;
}

FigureEightData load_figure_eight(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::InvalidInput, "cannot open " + path.string());
  FigureEightData data;
  data.prefactor_power = make_rational(-1, 4);
  std::map<int, Rational> ak;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string key, value;
    is >> key >> value;
    if (key.rfind("A_", 0) == 0 && key != "A_scale") {
      ak[std::stoi(key.substr(2))] = parse_rational(value);
    } else if (key == "A_scale") {
      data.scale = std::stoll(value);
    } else if (key == "prefactor_power") {
      data.prefactor_power = parse_rational(value);
    }
  }
  for (int k = 0; ak.count(k); ++k) data.Ak.push_back(ak[k]);
  if (data.Ak.empty()) fail(ErrorKind::InvalidInput, "no A_k in " + path.string());
  return data;
}

MPReal figure_eight_A(int prec_bits) {
  return MPReal::pi(prec_bits) / pow(MPReal(3.0, prec_bits), MPReal(1.5, prec_bits));
}

MPReal figure_eight_growth(int prec_bits) {
  MPComplex l = dilog(MPComplex::e(make_rational(1, 3), prec_bits));
  return mul_si(l.im(), 3) / mul_si(MPReal::pi(prec_bits), 2);
}

MPComplex figure_eight_printed_C(int prec_bits) {
  MPComplex l = dilog(MPComplex::e(make_rational(1, 3), prec_bits));
  return l * (MPReal(1.0, prec_bits) / MPReal::pi(prec_bits));
}

MPComplex figure_eight_asymptotic(const FigureEightData& data, const MPComplex& X, const MPComplex& C, int terms) {
  const int prec = X.prec();
  const MPComplex h = real_to_complex(figure_eight_A(prec)) / X;
  MPComplex sum(prec), hk = one(prec);
  MPReal denom(1.0, prec);  // k! scale^k
  const int n = std::min<int>(terms, static_cast<int>(data.Ak.size()));
  for (int k = 0; k < n; ++k) {
    sum += hk * (MPReal(data.Ak[static_cast<std::size_t>(k)], prec) / denom);
    hk *= h;
    denom = mul_si(denom, static_cast<long>((k + 1) * data.scale));
  }
  const MPComplex pref = real_to_complex(pow(MPReal(3.0, prec), MPReal(data.prefactor_power, prec)));
  return pref * pow(X, MPComplex(MPReal(1.5, prec), MPReal(prec))) * exp(C * X) * sum;
}

MPReal figure_eight_kashaev(std::int64_t N, int prec_bits) {
  if (N < 1) fail(ErrorKind::InvalidInput, "N must be positive");
  const MPComplex q = MPComplex::e(make_rational(1, N), prec_bits);
  MPComplex p = one(prec_bits), qk = q;
  MPReal s(prec_bits);
  for (std::int64_t k = 0; k < N; ++k) {
    s += norm(p);
    p *= one(prec_bits) - qk;
    qk *= q;
  }
  return s;
}

MPReal six_j_radial(const MPReal& q, int prec_bits) {
  if (!(q.sign() > 0 && q.to_double() < 1)) fail(ErrorKind::InvalidInput, "six_j_radial needs 0 < q < 1");
  const int wp = prec_bits + 64;
  const MPReal x = q.with_prec(wp);
  const MPReal eps = exp(MPReal(-static_cast<double>(wp), wp) * log(MPReal(2.0, wp)));
  // (q)_inf
  MPReal qinf(1.0, wp), qk = x;
  while (qk > eps) {
    qinf *= MPReal(1.0, wp) - qk;
    qk *= x;
  }
  // sum_n (-1)^n q^{(3n^2+n)/2} / (q)_n^3, terms accumulated by ratio.
  MPReal sum(1.0, wp), term(1.0, wp);
  MPReal qn(1.0, wp);
  MPReal largest(1.0, wp);
  for (long n = 1;; ++n) {
    qn *= x;                             // q^n
    // q^{(3n^2+n)/2} / q^{(3(n-1)^2+(n-1))/2} = q^{3n-1}
    term = -term * pow(x, MPReal(static_cast<double>(3 * n - 1), wp)) / ((MPReal(1.0, wp) - qn) * (MPReal(1.0, wp) - qn) * (MPReal(1.0, wp) - qn));
    sum += term;
    if (abs(term) > largest) largest = abs(term);
    if (n > 2 && abs(term) < eps * largest) break;
    if (n > 10000000) fail(ErrorKind::BudgetExceeded, "six_j_radial does not converge");
  }
  if (log2_abs(largest) - log2_abs(sum) > prec_bits) fail(ErrorKind::Precision, "cancellation exceeds the working precision");
  return (qinf * sum).with_prec(prec_bits);
}

std::array<std::int64_t, 4> gamma_for(const Rational& alpha) {
  const std::int64_t a = alpha.get_num().get_si(), c = alpha.get_den().get_si();
  std::int64_t d = 0;
  if (c > 1) {
    while (d < c && ((a * d - 1) % c + c) % c != 0) ++d;
    if (d == c) fail(ErrorKind::Internal, "no inverse modulo the denominator");
  }
  return {a, (a * d - 1) / c, c, d};
}

AlphaThirdComparison compare_alpha_third(const ModularityFit& fit, const ExponentChoice& exponent,
                                         const AlgebraicContext& ctx) {
  if (fit.series.size() < 2) fail(ErrorKind::InvalidInput, "need Delta A_0 and Delta A_1");
  const int prec = fit.series[0].prec();
  const double digits_per_bit = std::log10(2.0);
  AlphaThirdComparison out;
  out.exponent = exponent;
  const MPComplex delta = ctx.get("Delta").with_prec(prec);
  out.a0_printed = ctx.get("A0").with_prec(prec);
  out.a1_printed = ctx.get("A1").with_prec(prec);
  const MPComplex r = fit.series[1] / fit.series[0];
  MPComplex s0 = fit.series[0], rp = r;
  if (exponent.conjugated) {
    s0 = conj(s0);
    rp = -conj(r);
  }
  out.phase = match_phase(s0, delta * out.a0_printed, 72);
  out.a0_fit = s0 * MPComplex::e(make_rational(out.phase.k, out.phase.order), prec) / delta;
  out.a0_digits = agreement_bits(out.a0_fit, out.a0_printed) * digits_per_bit;
  out.a1_raw = r * out.a0_printed;
  out.a1_raw_digits = agreement_bits(out.a1_raw, out.a1_printed) * digits_per_bit;
  const MPComplex unit = one(prec);
  out.a1_mapped = (rp * MPReal(9.0, prec) + unit) * MPReal(24.0, prec) * out.a0_printed;
  out.a1_mapped_digits = agreement_bits(out.a1_mapped, out.a1_printed) * digits_per_bit;
  return out;
}

MPComplex figure_eight_modular_C(int prec_bits) {
  return MPComplex(MPReal(prec_bits), figure_eight_growth(prec_bits) * mul_si(MPReal::pi(prec_bits), 2));
}

std::vector<MPComplex> figure_eight_coefficients(const ModularityFit& fit) {
  const int prec = fit.series.at(0).prec();
  const MPComplex step = MPComplex(MPReal(prec), mul_si(MPReal::pi(prec), 2)) *
                         (MPReal(12.0, prec) / figure_eight_A(prec));
  std::vector<MPComplex> out;
  MPComplex f = one(prec);
  for (std::size_t j = 0; j < fit.series.size(); ++j) {
    out.push_back(fit.series[j] / fit.series[0] * f);
    f *= step * MPReal(static_cast<double>(j + 1), prec);
  }
  return out;
}

std::vector<SixJComparisonRow> six_j_comparison(const FigureEightData& data, const std::vector<std::int64_t>& xs,
                                                int prec_bits) {
  const MPComplex fitted = real_to_complex(figure_eight_growth(prec_bits));
  const MPComplex printed = figure_eight_printed_C(prec_bits);
  std::vector<SixJComparisonRow> rows;
  for (std::int64_t X : xs) {
    if (X < 1) fail(ErrorKind::InvalidInput, "X must be positive");
    SixJComparisonRow row;
    row.X = X;
    const MPReal x(big(X), prec_bits);
    row.lhs = six_j_radial(exp(-(MPReal(1.0, prec_bits) / x)), prec_bits);
    const MPComplex px = real_to_complex(x), mx = -px;
    // Optimal truncation of the divergent series sits near k ~ 1.3 X.
    const int terms = std::max(1, static_cast<int>(1.3 * static_cast<double>(X)));
    auto side = [&](const MPComplex& C) {
      return figure_eight_asymptotic(data, px, C, terms) / sqrt(px) +
             conj(figure_eight_asymptotic(data, mx, C, terms) / sqrt(mx));
    };
    row.rhs = side(fitted);
    row.rhs_printed = side(printed);
    const MPComplex l = real_to_complex(row.lhs);
    row.rel = (abs(l - row.rhs) / abs(row.rhs)).to_double();
    row.rel_printed = (abs(l - row.rhs_printed) / abs(row.rhs_printed)).to_double();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qknot
