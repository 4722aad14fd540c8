#include "siegel/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "siegel/brjuno.hpp"
#include "siegel/constants.hpp"
#include "siegel/dioph.hpp"
#include "siegel/errors.hpp"
#include "siegel/gauss.hpp"
#include "siegel/germs.hpp"
#include "siegel/parse.hpp"
#include "siegel/series_io.hpp"

namespace siegel::cli {

namespace {

using json = nlohmann::ordered_json;

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json number(long double v) { return number(static_cast<double>(v)); }

// Exact integers print as integers, everything else as the enclosure midpoint.
json number(const RealScalar& x) {
  if (const SurdNumber* e = x.exact_value()) {
    if (auto z = e->as_integer(); z && z->fits_slong_p()) return z->get_si();
  }
  return number(x.to_double());
}

json word_json(const Word& w) { return json(w); }

struct Report {
  json inputs = json::object();
  json result = json::object();
  json enclosures = json::object();
  json warnings = json::array();
  // JSON pointer into `result` of the table written by --csv.
  std::string table;

  void enclose(const std::string& name, const RealScalar& x) {
    enclosures[name] = {{"lo", lo_string(x)}, {"hi", hi_string(x)}, {"width", number(x.width_double())}};
  }
  void warn(const std::string& w) { warnings.push_back(w); }
};

struct Globals {
  int precision_bits = kDefaultPrecisionBits;
  int max_precision_bits = kDefaultMaxPrecisionBits;
  bool json_out = false;
  bool csv_out = false;
  unsigned threads = 1;
  std::optional<double> tol;
  std::string c_univ = "0";
  std::string c_prime;
  std::string c_radius;
  std::string out;
  std::string series_float = "long-double";
};

struct Options {
  std::string alphas;
  std::string alpha;
  std::string word;
  std::string word_policy;
  int depth = 0;
  std::string variant = "B";
  std::string regime = "log";
  std::string b;
  std::string c;
  std::string tau;
  std::string tau_prime;
  std::string c_dual;
  long long q_max = 0;
  long long k_max = 0;
  int n = 0;
  std::string mode = "proof";
  int start = 1;
  std::string recursion_k;
  std::string series;
  std::string h0;
  std::string germs;
  int order = 0;
  std::string perturb;
  double window = 0.5;
  std::optional<double> divisor_floor;
};

class Context {
 public:
  Context(const Globals& g, Report& report) : g_(g), report_(report) {
    if (g.precision_bits < 16) throw Error(ErrorKind::InvalidInput, "--precision-bits must be >= 16");
    if (g.precision_bits > g.max_precision_bits) {
      throw Error(ErrorKind::InvalidInput, "--precision-bits exceeds --max-precision-bits");
    }
    if (g.tol && !(*g.tol > 0)) throw Error(ErrorKind::InvalidInput, "--tol must be positive");
    if (g.threads < 1) throw Error(ErrorKind::InvalidInput, "--threads must be >= 1");
  }

  PrecisionPolicy policy() const { return {g_.precision_bits, g_.max_precision_bits}; }
  int prec() const { return g_.precision_bits; }
  unsigned threads() const { return g_.threads; }
  double tol(double fallback) const { return g_.tol.value_or(fallback); }
  const Globals& globals() const { return g_; }
  Report& report() const { return report_; }

  RealScalar scalar(const std::string& text, const std::string& name) const {
    if (text.empty()) throw Error(ErrorKind::InvalidInput, "missing " + name);
    ParsedReal p = parse_real(text);
    for (auto& w : p.warnings) report_.warn(name + ": " + w);
    return RealScalar::exact(std::move(p.value), prec());
  }

  RotationVector alphas(const std::string& text) const {
    std::vector<RealScalar> values;
    for (auto& p : parse_real_list(text)) {
      for (auto& w : p.warnings) report_.warn("alphas: " + w);
      values.push_back(RealScalar::exact(std::move(p.value), prec()));
    }
    std::vector<std::string> notes;
    RotationVector v = RotationVector::normalized(std::move(values), &notes, policy());
    for (auto& n : notes) report_.warn(n);
    return v;
  }

  ConstantsConfig constants() const {
    std::optional<RealScalar> cp, cr;
    if (!g_.c_prime.empty()) cp = scalar(g_.c_prime, "--c-prime");
    if (!g_.c_radius.empty()) cr = scalar(g_.c_radius, "--c-radius");
    return ConstantsConfig::make(scalar(g_.c_univ, "--c-univ"), cp, cr, policy());
  }

 private:
  const Globals& g_;
  Report& report_;
};

BrjunoVariant parse_variant(const std::string& s) {
  if (s == "B") return BrjunoVariant::B;
  if (s == "Bprime" || s == "B'" || s == "Bp") return BrjunoVariant::BPrime;
  throw Error(ErrorKind::InvalidInput, "--variant must be B or Bprime");
}

int require_depth(const Options& o) {
  if (o.depth < 1) throw Error(ErrorKind::InvalidInput, "--depth must be >= 1");
  return o.depth;
}

// The word named by --word or --word-policy.
Word resolve_word(const Context& ctx, const RotationVector& alpha, const Options& o,
                  BrjunoVariant variant, const std::string& default_policy = "") {
  Report& r = ctx.report();
  if (!o.word.empty()) {
    if (!o.word_policy.empty()) throw Error(ErrorKind::InvalidInput, "give --word or --word-policy, not both");
    Word w = parse_int_list(o.word);
    check_word(w, alpha.size());
    r.result["word_policy"] = "explicit";
    return w;
  }
  const std::string policy = o.word_policy.empty() ? default_policy : o.word_policy;
  if (policy.empty()) throw Error(ErrorKind::InvalidInput, "missing --word or --word-policy");
  r.result["word_policy"] = policy;
  auto arg = [&](const std::string& prefix) -> std::optional<std::string> {
    if (policy.rfind(prefix, 0) == 0) return policy.substr(prefix.size());
    return std::nullopt;
  };
  if (auto list = arg("list:")) {
    Word w = parse_int_list(*list);
    check_word(w, alpha.size());
    return w;
  }
  if (auto j = arg("constant:")) {
    Word letter = parse_int_list(*j);
    if (letter.size() != 1) throw Error(ErrorKind::InvalidInput, "constant:j takes one index");
    Word w(static_cast<std::size_t>(require_depth(o)), letter[0]);
    check_word(w, alpha.size());
    return w;
  }
  if (policy == "greedy" || arg("greedy:")) {
    SelectorOptions so;
    so.precision = ctx.policy();
    if (auto s = arg("greedy:")) so.start = parse_int_list(*s).at(0);
    RealScalar one = RealScalar::integer(1, ctx.prec());
    return select_word_appendix(alpha, one, one, require_depth(o), SelectorMode::Greedy, so).word;
  }
  if (auto ct = arg("appendix:")) {
    auto parts = parse_real_list(*ct);
    if (parts.size() != 2) throw Error(ErrorKind::InvalidInput, "appendix:C,tau takes two values");
    SelectorOptions so;
    so.precision = ctx.policy();
    return select_word_appendix(alpha, RealScalar::exact(parts[0].value, ctx.prec()),
                                RealScalar::exact(parts[1].value, ctx.prec()), require_depth(o),
                                SelectorMode::Proof, so)
        .word;
  }
  if (policy == "min") {
    SearchOptions so{ctx.threads(), ctx.policy()};
    return brjuno_minimize(alpha, require_depth(o), variant, so).best_word;
  }
  throw Error(ErrorKind::InvalidInput, "unknown word policy '" + policy + "'");
}

std::string read_source(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) return text;
  std::ifstream in(text);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read '" + text + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json parse_json(const std::string& source) {
  try {
    return nlohmann::json::parse(read_source(source));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------- commands

void cmd_gauss_orbit(const Context& ctx, const Options& o) {
  Report& r = ctx.report();
  RotationVector alpha = ctx.alphas(o.alphas);
  Word word = resolve_word(ctx, alpha, o, BrjunoVariant::B);
  auto orbit = gauss_orbit(alpha, word, ctx.policy());
  r.result["word"] = word_json(word);
  json steps = json::array();
  for (std::size_t n = 0; n < orbit.size(); ++n) {
    const GaussStep& s = orbit[n];
    json tilde = json::array();
    for (std::size_t i = 0; i < s.image.size(); ++i) {
      tilde.push_back(number(s.image[i]));
      r.enclose("steps[" + std::to_string(n) + "].alpha_tilde[" + std::to_string(i) + "]", s.image[i]);
    }
    steps.push_back({{"depth", n}, {"w", s.w}, {"a", s.a}, {"eps", s.eps}, {"alpha_tilde", tilde},
                     {"exact", s.image.all_exact()}});
  }
  r.result["steps"] = std::move(steps);
  r.table = "/steps";
}

void cmd_brjuno(const Context& ctx, const Options& o) {
  Report& r = ctx.report();
  RotationVector alpha = ctx.alphas(o.alphas);
  BrjunoVariant variant = parse_variant(o.variant);
  Word word = resolve_word(ctx, alpha, o, variant);
  BrjunoSum sum = brjuno_partial(alpha, word, variant, ctx.policy());
  r.result["variant"] = to_string(variant);
  r.result["depth"] = sum.depth;
  r.result["word"] = word_json(word);
  r.result["value"] = number(sum.value);
  json terms = json::array();
  for (const auto& t : sum.terms) {
    terms.push_back({{"depth", t.depth}, {"product", number(t.product)}, {"term", number(t.value)}});
  }
  r.result["terms"] = std::move(terms);
  r.enclose("value", sum.value);
  r.table = "/terms";
}

void cmd_brjuno_min(const Context& ctx, const Options& o) {
  Report& r = ctx.report();
  RotationVector alpha = ctx.alphas(o.alphas);
  BrjunoVariant variant = parse_variant(o.variant);
  SearchOptions so{ctx.threads(), ctx.policy()};
  WordSearchResult res = brjuno_minimize(alpha, require_depth(o), variant, so);
  r.result["variant"] = to_string(variant);
  r.result["depth"] = o.depth;
  r.result["best_word"] = word_json(res.best_word);
  r.result["best_value"] = number(res.best_value);
  r.result["proof"] = res.proof;
  // Terms are positive, so every longer word (finite or not) sums to at least this.
  r.result["infimum_lower_bound"] = number(res.best_value.lo().to_double(MPFR_RNDD));
  json excluded = json::array();
  for (const auto& e : res.excluded) excluded.push_back({{"prefix", word_json(e.prefix)}, {"reason", e.reason}});
  r.result["excluded"] = std::move(excluded);
  // Depends on scheduling when threads > 1.
  r.result["stats"] = {{"nodes_expanded", res.nodes_expanded}, {"threads", ctx.threads()}};
  r.enclose("best_value", res.best_value);
}

void cmd_height_bound(const Context& ctx, const Options& o) {
  Report& r = ctx.report();
  RotationVector alpha = ctx.alphas(o.alphas);
  HeightRegime regime;
  if (o.regime == "log") regime = HeightRegime::Log;
  else if (o.regime == "loglog") regime = HeightRegime::LogLog;
  else throw Error(ErrorKind::InvalidInput, "--regime must be log or loglog");
  BrjunoVariant variant = regime == HeightRegime::Log ? BrjunoVariant::B : BrjunoVariant::BPrime;
  Word word = resolve_word(ctx, alpha, o, variant);
  ConstantsConfig consts = ctx.constants();
  RealScalar y = height_bound(alpha, word, regime, consts, ctx.policy());
  r.result["regime"] = to_string(regime);
  r.result["word"] = word_json(word);
  r.result["value"] = number(y);
  r.result["c_univ"] = number(consts.c_univ);
  r.result["c_prime"] = number(consts.c_prime);
  r.enclose("value", y);
}

void cmd_radius_bound(const Context& ctx, const Options& o) {
  Report& r = ctx.report();
  RealScalar b;
  if (!o.b.empty()) {
    b = ctx.scalar(o.b, "--b");
  } else {
    RotationVector alpha = ctx.alphas(o.alphas);
    Word word = resolve_word(ctx, alpha, o, BrjunoVariant::B);
    b = brjuno_partial(alpha, word, BrjunoVariant::B, ctx.policy()).value;
    r.result["word"] = word_json(word);
  }
  ConstantsConfig consts = ctx.constants();
  RealScalar rb = siegel_radius_bound(b, consts, ctx.policy());
  r.result["b"] = number(b);
  r.result["c_radius"] = number(consts.c_radius);
  r.result["r_bound"] = number(rb);
  r.enclose("b", b);
  r.enclose("r_bound", rb);
}

json dc_witness_json(const DcWitness& w) {
  return {{"q", w.q}, {"p", w.p}, {"value", number(w.value)}, {"margin", number(w.margin)}};
}

void cmd_dc_check(const Context& ctx, const Options& o) {
  Report& r = ctx.report();
  RotationVector alpha = ctx.alphas(o.alphas);
  RealScalar c = ctx.scalar(o.c, "--c");
  RealScalar tau = ctx.scalar(o.tau, "--tau");
  DcCheckResult res = dc_check(alpha, c, tau, o.q_max, {ctx.threads(), ctx.policy()});
  r.result["holds"] = res.holds;
  r.result["first_violation"] = res.first_violation ? json(res.first_violation) : json(nullptr);
  r.result["witness"] = dc_witness_json(res.witness);
  r.enclose("witness.value", res.witness.value);
  r.enclose("witness.margin", res.witness.margin);
}

void cmd_dc_estimate(const Context& ctx, const Options& o) {
  Report& r = ctx.report();
  RotationVector alpha = ctx.alphas(o.alphas);
  RealScalar tau = ctx.scalar(o.tau, "--tau");
  DcEstimate est = dc_estimate(alpha, tau, o.q_max, {ctx.threads(), ctx.policy()});
  r.result["value"] = number(est.value);
  r.result["q"] = est.q;
  r.result["tau"] = number(tau);
  r.result["q_max"] = o.q_max;
  r.enclose("value", est.value);
}

json dual_witness_json(const DualWitness& w) {
  return {{"p", w.p}, {"q", w.q}, {"norm", w.norm}, {"value", number(w.value)}, {"ratio", number(w.ratio)}};
}

void cmd_dual_check(const Context& ctx, const Options& o) {
  Report& r = ctx.report();
  RotationVector alpha = ctx.alphas(o.alphas);
  RealScalar cd = ctx.scalar(o.c_dual, "--c-dual");
  RealScalar tp;
  if (!o.tau_prime.empty()) {
    if (!o.tau.empty()) throw Error(ErrorKind::InvalidInput, "give --tau-prime or --tau, not both");
    tp = ctx.scalar(o.tau_prime, "--tau-prime");
  } else if (!o.tau.empty()) {
    tp = transference(static_cast<int>(alpha.size()), ctx.scalar(o.tau, "--tau"),
                      TransferenceDirection::Forward, ctx.policy());
    r.warn("tau' derived from --tau by transference");
  } else {
    throw Error(ErrorKind::InvalidInput, "missing --tau-prime or --tau");
  }
  DualCheckResult res = dual_form_check(alpha, cd, tp, o.k_max, {ctx.threads(), ctx.policy()});
  r.result["holds"] = res.holds;
  r.result["tau_prime"] = number(tp);
  r.result["vectors_scanned"] = res.vectors_scanned;
  r.result["witness"] = dual_witness_json(res.witness);
  r.result["first_violation"] = res.first_violation ? dual_witness_json(*res.first_violation) : json(nullptr);
  r.enclose("witness.value", res.witness.value);
  r.enclose("witness.ratio", res.witness.ratio);
}

void cmd_transference(const Context& ctx, const Options& o) {
  Report& r = ctx.report();
  if (o.tau.empty() == o.tau_prime.empty()) {
    throw Error(ErrorKind::InvalidInput, "give exactly one of --tau (forward) or --tau-prime (inverse)");
  }
  if (!o.tau.empty()) {
    RealScalar t = transference(o.n, ctx.scalar(o.tau, "--tau"), TransferenceDirection::Forward, ctx.policy());
    r.result["direction"] = "forward";
    r.result["tau_prime"] = number(t);
    r.enclose("tau_prime", t);
  } else {
    RealScalar t = transference(o.n, ctx.scalar(o.tau_prime, "--tau-prime"), TransferenceDirection::Inverse,
                                ctx.policy());
    r.result["direction"] = "inverse";
    r.result["tau"] = number(t);
    r.enclose("tau", t);
  }
}

void cmd_word_appendix(const Context& ctx, const Options& o) {
  Report& r = ctx.report();
  RotationVector alpha = ctx.alphas(o.alphas);
  RealScalar tau = ctx.scalar(o.tau, "--tau");
  SelectorMode mode;
  if (o.mode == "proof") mode = SelectorMode::Proof;
  else if (o.mode == "greedy") mode = SelectorMode::Greedy;
  else throw Error(ErrorKind::InvalidInput, "--mode must be proof or greedy");
  RealScalar c;
  if (o.c == "scan") {
    if (o.q_max < 1) throw Error(ErrorKind::InvalidInput, "--c scan needs --q-max");
    c = dc_estimate(alpha, tau, o.q_max, {ctx.threads(), ctx.policy()}).value;
    r.warn("C taken from dc-estimate over q <= " + std::to_string(o.q_max));
  } else {
    c = ctx.scalar(o.c, "--c");
  }
  SelectorOptions so;
  so.start = o.start;
  so.precision = ctx.policy();
  if (!o.recursion_k.empty()) so.recursion_k = ctx.scalar(o.recursion_k, "--k");
  AppendixWordTrace t = select_word_appendix(alpha, c, tau, require_depth(o), mode, so);

  r.result["mode"] = to_string(mode);
  r.result["word"] = word_json(t.word);
  r.result["c"] = number(c);
  r.result["tau"] = number(tau);
  r.result["tau_prime"] = number(t.tau_prime);
  r.result["tau_double_prime"] = number(t.tau_double_prime);
  r.result["recursion_k"] = number(t.recursion_k);
  r.result["kappa"] = number(t.kappa);
  r.result["envelope_k"] = number(t.envelope_k);
  r.result["envelope_holds"] = t.envelope_holds;
  r.result["brjuno_B"] = number(t.brjuno.value);
  json steps = json::array();
  for (std::size_t n = 0; n < t.steps.size(); ++n) {
    const AppendixStep& s = t.steps[n];
    steps.push_back({{"depth", n}, {"w", s.w}, {"q", s.q}, {"beta", number(s.beta)},
                     {"c_n", number(s.c_n)}, {"threshold", number(s.threshold)}, {"rule", s.rule},
                     {"k", s.k}, {"j", s.j}, {"pivot_alpha", number(s.pivot_alpha)},
                     {"next_alpha", number(s.next_alpha)}});
  }
  r.result["steps"] = std::move(steps);
  json env = json::array();
  for (const auto& e : t.envelope) {
    env.push_back({{"depth", e.depth}, {"increment", number(e.increment)}, {"envelope", number(e.envelope)},
                   {"within", e.within}});
  }
  r.result["envelope"] = std::move(env);
  r.enclose("kappa", t.kappa);
  r.enclose("brjuno_B", t.brjuno.value);
  r.table = "/steps";
}

template <class T>
LinearizeOptions<T> linearize_options(const Context& ctx, const Options& o) {
  LinearizeOptions<T> lo;
  lo.tol = static_cast<T>(ctx.tol(1e-9));
  if (o.divisor_floor) lo.divisor_floor = static_cast<T>(*o.divisor_floor);
  lo.window.lo_fraction = o.window;
  return lo;
}

template <class T>
int series_order(const Options& o, int available) {
  int m = o.order > 0 ? o.order : available;
  if (m < 2 || m > kMaxSeriesOrder) {
    throw Error(ErrorKind::InvalidInput, "--order must be in 2.." + std::to_string(kMaxSeriesOrder));
  }
  return m;
}

template <class T>
Series<T> pad(const Series<T>& s, int order) {
  return s.truncated(order);
}

template <class T>
void cmd_linearize(const Context& ctx, const Options& o) {
  Report& r = ctx.report();
  RealScalar alpha = ctx.alphas(o.alpha.empty() ? o.alphas : o.alpha)[0];
  const std::complex<T> lambda = rotation_multiplier<T>(alpha);
  Series<T> s = series_from_json<T>(parse_json(o.series), lambda);
  const int m = series_order<T>(o, std::max(s.order(), 2));
  auto f = PowerSeriesGerm<T>::from_series(alpha, pad(s, m));
  auto res = linearize(f, m, linearize_options<T>(ctx, o));
  r.result["order"] = m;
  r.result["alpha"] = number(alpha);
  r.result["residual"] = number(res.residual);
  r.result["within_tol"] = res.within_tol;
  r.result["min_divisor"] = number(res.min_divisor);
  r.result["min_divisor_order"] = res.min_divisor_order;
  r.result["radius_estimate"] = number(res.radius_estimate);
  r.result["h"] = series_to_json(res.h);
  r.table = "/h/coeffs";
}

template <class T>
std::vector<PowerSeriesGerm<T>> synth_from(const Context& ctx, const Options& o, const RotationVector& alphas,
                                           int* order_out) {
  Series<T> h0 = series_from_json<T>(parse_json(o.h0), std::complex<T>(1));
  const int m = series_order<T>(o, o.order > 0 ? o.order : kDefaultSeriesOrder);
  *order_out = m;
  (void)ctx;
  return synth_commuting_family(pad(h0, m), alphas, m);
}

template <class T>
json commutator_table(const std::vector<PowerSeriesGerm<T>>& g, int m, T* worst) {
  json out = json::array();
  *worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      T res = commutator_residual(g[i].series, g[j].series, m);
      *worst = std::max(*worst, res);
      out.push_back({{"i", i + 1}, {"j", j + 1}, {"residual", number(res)}});
    }
  }
  return out;
}

template <class T>
void cmd_synth(const Context& ctx, const Options& o) {
  Report& r = ctx.report();
  RotationVector alphas = ctx.alphas(o.alphas);
  int m = 0;
  auto family = synth_from<T>(ctx, o, alphas, &m);
  T worst = 0;
  r.result["order"] = m;
  r.result["commutators"] = commutator_table(family, m, &worst);
  r.result["max_commutator"] = number(worst);
  json germs = json::array();
  for (const auto& g : family) germs.push_back({{"alpha", number(g.alpha)}, {"series", series_to_json(g.series)}});
  r.result["germs"] = std::move(germs);
  r.table = "/commutators";
}

// "k,n,re,im": add re + i im to coefficient n of germ k.
template <class T>
void apply_perturbation(std::vector<PowerSeriesGerm<T>>& germs, const std::string& spec, Report& r) {
  auto parts = parse_real_list(spec);
  if (parts.size() != 4) throw Error(ErrorKind::InvalidInput, "--perturb takes k,n,re,im");
  auto k = parts[0].value.as_integer();
  auto n = parts[1].value.as_integer();
  if (!k || !n || *k < 1 || *k > static_cast<long>(germs.size()) || *n < 2) {
    throw Error(ErrorKind::InvalidInput, "--perturb index out of range");
  }
  auto& s = germs[k->get_si() - 1].series;
  if (n->get_si() > s.order()) throw Error(ErrorKind::InvalidInput, "--perturb order above truncation");
  T re = static_cast<T>(parts[2].value.enclose(128).mid().to_long_double());
  T im = static_cast<T>(parts[3].value.enclose(128).mid().to_long_double());
  s[static_cast<int>(n->get_si())] += std::complex<T>(re, im);
  r.warn("germ " + k->get_str() + " coefficient " + n->get_str() + " perturbed");
}

template <class T>
std::vector<PowerSeriesGerm<T>> germs_from(const Context& ctx, const Options& o, const RotationVector& alphas,
                                           int* order_out) {
  if (!o.h0.empty() == !o.germs.empty()) throw Error(ErrorKind::InvalidInput, "give exactly one of --h0 or --germs");
  std::vector<PowerSeriesGerm<T>> germs;
  if (!o.h0.empty()) {
    germs = synth_from<T>(ctx, o, alphas, order_out);
  } else {
    nlohmann::json j = parse_json(o.germs);
    if (!j.is_array() || j.size() != alphas.size()) {
      throw Error(ErrorKind::InvalidInput, "--germs must be an array with one series per alpha");
    }
    int m = kMaxSeriesOrder;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto& entry = j[i].is_object() && j[i].contains("series") ? j[i]["series"] : j[i];
      auto lambda = rotation_multiplier<T>(alphas[i]);
      germs.push_back(PowerSeriesGerm<T>::from_series(alphas[i], series_from_json<T>(entry, lambda)));
      m = std::min(m, germs.back().order());
    }
    *order_out = series_order<T>(o, m);
  }
  if (!o.perturb.empty()) apply_perturbation(germs, o.perturb, ctx.report());
  return germs;
}

template <class T>
void cmd_simul_check(const Context& ctx, const Options& o) {
  Report& r = ctx.report();
  RotationVector alphas = ctx.alphas(o.alphas);
  int m = 0;
  auto germs = germs_from<T>(ctx, o, alphas, &m);
  auto res = simultaneous_check(germs, m, linearize_options<T>(ctx, o));
  r.result["order"] = m;
  r.result["linearizable"] = res.linearizable;
  json residuals = json::array();
  for (T x : res.residuals) residuals.push_back(number(x));
  r.result["residuals"] = std::move(residuals);
  T worst = 0;
  r.result["commutators"] = commutator_table(germs, m, &worst);
  r.result["max_commutator"] = number(worst);
  r.result["min_divisor"] = number(res.base.min_divisor);
  r.result["radius_estimate"] = number(res.base.radius_estimate);
  r.result["h"] = series_to_json(res.base.h);
  r.table = "/h/coeffs";
}

template <class T>
void cmd_radius_compare(const Context& ctx, const Options& o) {
  Report& r = ctx.report();
  RotationVector alphas = ctx.alphas(o.alphas);
  int m = 0;
  PowerSeriesGerm<T> f = [&] {
    if (!o.series.empty()) {
      if (!o.h0.empty()) throw Error(ErrorKind::InvalidInput, "give --series or --h0, not both");
      auto lambda = rotation_multiplier<T>(alphas[0]);
      Series<T> s = series_from_json<T>(parse_json(o.series), lambda);
      m = series_order<T>(o, std::max(s.order(), 2));
      return PowerSeriesGerm<T>::from_series(alphas[0], pad(s, m));
    }
    return germs_from<T>(ctx, o, alphas, &m).front();
  }();
  auto lin = linearize(f, m, linearize_options<T>(ctx, o));
  Options wo = o;
  std::string fallback;
  if (wo.word.empty() && wo.word_policy.empty()) {
    if (alphas.size() == 1) {
      fallback = "constant:1";
      if (wo.depth < 1) wo.depth = 60;
    } else {
      fallback = "min";
      if (wo.depth < 1) wo.depth = 8;
    }
  }
  Word word = resolve_word(ctx, alphas, wo, BrjunoVariant::B, fallback);
  RealScalar b = brjuno_partial(alphas, word, BrjunoVariant::B, ctx.policy()).value;
  ConstantsConfig consts = ctx.constants();
  RadiusReport rep = radius_estimate_vs_bound(lin, b, consts, ctx.policy());
  r.result["order"] = m;
  r.result["word_depth"] = word.size();
  r.result["B"] = number(rep.b_value);
  r.result["c_radius"] = number(consts.c_radius);
  r.result["r_est"] = number(rep.r_est);
  r.result["r_bound"] = number(rep.r_bound);
  r.result["ratio"] = number(rep.ratio);
  r.result["residual"] = number(lin.residual);
  r.result["min_divisor"] = number(lin.min_divisor);
  r.enclose("B", rep.b_value);
  r.enclose("r_bound", rep.r_bound);
}

// ---------------------------------------------------------------- output

std::string csv_cell(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_cell(v[i]);
    return s;
  }
  if (v.is_null()) return "";
  return v.dump();
}

void write_csv(const Report& r, std::ostream& os) {
  if (!r.table.empty()) {
    const json& rows = r.result.at(json::json_pointer(r.table));
    if (!rows.empty()) {
      std::vector<std::string> keys;
      for (auto it = rows[0].begin(); it != rows[0].end(); ++it) keys.push_back(it.key());
      for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
      os << "\n";
      for (const auto& row : rows) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
          os << (i ? "," : "") << (row.contains(keys[i]) ? csv_cell(row[keys[i]]) : "");
        }
        os << "\n";
      }
      return;
    }
  }
  os << "key,value\n";
  for (auto it = r.result.begin(); it != r.result.end(); ++it) {
    if (it.value().is_object()) continue;
    os << it.key() << "," << csv_cell(it.value()) << "\n";
  }
}

using Handler = std::function<void(const Context&, const Options&)>;

template <template <class> class Cmd>
Handler by_float(const Globals& g) {
  return [&g](const Context& ctx, const Options& o) {
    if (g.series_float == "double") Cmd<double>::run(ctx, o);
    else Cmd<long double>::run(ctx, o);
  };
}

template <class T> struct Linearize { static void run(const Context& c, const Options& o) { cmd_linearize<T>(c, o); } };
template <class T> struct Synth { static void run(const Context& c, const Options& o) { cmd_synth<T>(c, o); } };
template <class T> struct SimulCheck { static void run(const Context& c, const Options& o) { cmd_simul_check<T>(c, o); } };
template <class T> struct RadiusCompare { static void run(const Context& c, const Options& o) { cmd_radius_compare<T>(c, o); } };

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gauss maps, Brjuno sums, Diophantine scans and germ linearization", "siegel"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  Options o;

  app.add_option("--precision-bits", g.precision_bits, "initial working precision");
  app.add_option("--max-precision-bits", g.max_precision_bits, "refinement cap");
  auto* json_flag = app.add_flag("--json", g.json_out, "JSON output (default)");
  app.add_flag("--csv", g.csv_out, "CSV table output")->excludes(json_flag);
  app.add_option("--threads", g.threads, "worker threads");
  app.add_option("--tol", g.tol, "tolerance for series checks");
  app.add_option("--c-univ", g.c_univ, "additive constant of t(alpha)");
  app.add_option("--c-prime", g.c_prime, "additive constant of the height bound");
  app.add_option("--c-radius", g.c_radius, "prefactor of the radius bound");
  app.add_option("--out", g.out, "write output to this file");
  app.add_option("--series-float", g.series_float, "series arithmetic: double or long-double")
      ->check(CLI::IsMember({"double", "long-double"}));

  auto alphas = [&](CLI::App* s, bool required = true) {
    auto* opt = s->add_option("--alphas", o.alphas, "comma-separated rotation numbers");
    if (required) opt->required();
  };
  auto word_opts = [&](CLI::App* s) {
    s->add_option("--word", o.word, "explicit word, e.g. 1,2,1");
    s->add_option("--word-policy", o.word_policy, "list:..., constant:j, greedy, appendix:C,tau or min");
    s->add_option("--depth", o.depth, "word length");
  };
  auto series_opts = [&](CLI::App* s) {
    s->add_option("--order", o.order, "truncation order M");
    s->add_option("--window", o.window, "root-test window start as a fraction of M");
    s->add_option("--divisor-floor", o.divisor_floor, "smallest admissible |lambda^n - lambda|");
  };

  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const std::string& name, const std::string& help, Handler h) {
    CLI::App* s = app.add_subcommand(name, help);
    commands.emplace_back(s, std::move(h));
    return s;
  };

  {
    auto* s = add("gauss-orbit", "orbit of the Gauss map along a word", cmd_gauss_orbit);
    alphas(s);
    word_opts(s);
  }
  {
    auto* s = add("brjuno", "Brjuno-type sum along a word", cmd_brjuno);
    alphas(s);
    word_opts(s);
    s->add_option("--variant", o.variant, "B or Bprime");
  }
  {
    auto* s = add("brjuno-min", "minimum of the sum over all words of a given length", cmd_brjuno_min);
    alphas(s);
    s->add_option("--depth", o.depth, "word length")->required();
    s->add_option("--variant", o.variant, "B or Bprime");
  }
  {
    auto* s = add("height-bound", "height bound along a word", cmd_height_bound);
    alphas(s);
    word_opts(s);
    s->add_option("--regime", o.regime, "log or loglog");
  }
  {
    auto* s = add("radius-bound", "c_radius * exp(-2 pi B)", cmd_radius_bound);
    alphas(s, false);
    word_opts(s);
    s->add_option("--b", o.b, "Brjuno value (otherwise computed from --alphas and a word)");
  }
  {
    auto* s = add("dc-check", "test the simultaneous Diophantine condition for q <= Q", cmd_dc_check);
    alphas(s);
    s->add_option("--c", o.c, "constant C")->required();
    s->add_option("--tau", o.tau, "exponent tau")->required();
    s->add_option("--q-max", o.q_max, "largest q scanned")->required();
  }
  {
    auto* s = add("dc-estimate", "min over q <= Q of q^tau max_j dist(q alpha_j, Z)", cmd_dc_estimate);
    alphas(s);
    s->add_option("--tau", o.tau, "exponent tau")->required();
    s->add_option("--q-max", o.q_max, "largest q scanned")->required();
  }
  {
    auto* s = add("dual-check", "test the dual linear-form inequality for ||k|| <= K", cmd_dual_check);
    alphas(s);
    s->add_option("--c-dual", o.c_dual, "constant C'")->required();
    s->add_option("--tau-prime", o.tau_prime, "exponent tau'");
    s->add_option("--tau", o.tau, "simultaneous exponent; tau' derived by transference");
    s->add_option("--k-max", o.k_max, "largest sup norm scanned")->required();
  }
  {
    auto* s = add("transference", "exponent exchange tau <-> tau'", cmd_transference);
    s->add_option("--n", o.n, "dimension N")->required();
    s->add_option("--tau", o.tau, "forward: tau");
    s->add_option("--tau-prime", o.tau_prime, "inverse: tau'");
  }
  {
    auto* s = add("word-appendix", "word selected from a Diophantine class", cmd_word_appendix);
    alphas(s);
    s->add_option("--c", o.c, "class constant C, or 'scan' to use dc-estimate")->required();
    s->add_option("--tau", o.tau, "class exponent tau")->required();
    s->add_option("--depth", o.depth, "word length")->required();
    s->add_option("--mode", o.mode, "proof or greedy");
    s->add_option("--start", o.start, "first letter");
    s->add_option("--k", o.recursion_k, "recursion constant (default 1)");
    s->add_option("--q-max", o.q_max, "scan range for --c scan");
  }
  {
    auto* s = add("linearize", "solve f(h(z)) = h(lambda z) order by order", by_float<Linearize>(g));
    s->add_option("--alpha", o.alpha, "rotation number")->required();
    s->add_option("--series", o.series, "germ series (JSON text or file)")->required();
    series_opts(s);
  }
  {
    auto* s = add("synth", "commuting family h0 o R_k o h0^-1", by_float<Synth>(g));
    alphas(s);
    s->add_option("--h0", o.h0, "generator series (JSON text or file)")->required();
    series_opts(s);
  }
  {
    auto* s = add("simul-check", "one conjugacy for a commuting family", by_float<SimulCheck>(g));
    alphas(s);
    s->add_option("--h0", o.h0, "synthesize the family from this generator");
    s->add_option("--germs", o.germs, "JSON array of series, one per alpha");
    s->add_option("--perturb", o.perturb, "k,n,re,im added to a coefficient");
    series_opts(s);
  }
  {
    auto* s = add("radius-compare", "estimated radius against c_radius exp(-2 pi B)", by_float<RadiusCompare>(g));
    alphas(s);
    s->add_option("--series", o.series, "germ for the first alpha");
    s->add_option("--h0", o.h0, "synthesize the family and use its first germ");
    word_opts(s);
    series_opts(s);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream so, se;
    int code = app.exit(e, so, se);
    out << so.str();
    err << se.str();
    return code == 0 ? 0 : 3;
  }

  for (auto& [sub, handler] : commands) {
    if (!sub->parsed()) continue;
    Report report;
    json document;
    try {
      auto t0 = std::chrono::steady_clock::now();
      Context ctx(g, report);
      report.inputs["precision_bits"] = g.precision_bits;
      report.inputs["max_precision_bits"] = g.max_precision_bits;
      report.inputs["threads"] = g.threads;
      for (const CLI::Option* opt : sub->get_options()) {
        if (opt->count() == 0 || opt->get_name() == "--help") continue;
        std::string key = opt->get_name();
        key.erase(0, key.find_first_not_of('-'));
        key = CLI::detail::to_lower(key);
        report.inputs[key] = opt->as<std::string>();
      }
      handler(ctx, o);
      auto t1 = std::chrono::steady_clock::now();
      document = {{"command", sub->get_name()},
                  {"inputs", report.inputs},
                  {"result", report.result},
                  {"enclosures", report.enclosures},
                  {"warnings", report.warnings},
                  {"timing_ms", std::chrono::duration<double, std::milli>(t1 - t0).count()}};
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return exit_code(e.kind());
    } catch (const CLI::Error& e) {
      err << "error: " << e.what() << "\n";
      return 3;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 4;
    }

    std::ostringstream text;
    if (g.csv_out) write_csv(report, text);
    else text << document.dump(2) << "\n";
    if (!g.out.empty()) {
      std::ofstream f(g.out);
      if (!f) {
        err << "error: cannot write '" << g.out << "'\n";
        return 3;
      }
      f << text.str();
    } else {
      out << text.str();
    }
    return 0;
  }
  err << "error: no subcommand\n";
  return 3;
}

}  // namespace siegel::cli
