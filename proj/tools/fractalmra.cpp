// fractalmra: command-line front end for the fractal MRA library.
//
// Exit codes: 0 success, 2 precondition/invalid input, 3 cap or range
// exceeded, 64 unknown subcommand.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fractalmra/duality.hpp"
#include "fractalmra/error.hpp"
#include "fractalmra/filterbank.hpp"
#include "fractalmra/ifs.hpp"
#include "fractalmra/lattice.hpp"
#include "fractalmra/measure.hpp"
#include "fractalmra/tables.hpp"
#include "fractalmra/transfer.hpp"

using namespace fractalmra;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPrecondition = 2;
constexpr int kExitCap = 3;
constexpr int kExitUnknown = 64;

const std::vector<std::string> kSubcommands{"dimension", "filters", "spectrum", "moments", "cycles",
                                            "classify",  "duality", "onb-check", "cascade", "riesz",
                                            "gram",      "table",   "replimit"};

struct Config {
  int scale = 0;
  std::vector<int> digits;
  std::vector<std::int64_t> dual;
  std::vector<std::int64_t> taps;
  std::vector<std::int64_t> exponents;
  std::string modifier = "none";
  std::string format = "json";
  std::string output;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  double moment_tol = 1e-12;
  std::int64_t range = 256;
  int max_iter = 64;
  int max_length = 12;
  int steps = 8;
  std::size_t count = 8;
  int depth = 40;
  double xi = 0.3;
  std::size_t sums = 256;
  int riesz_n = 6;
  std::int64_t grid = 6561;
  std::int64_t j_min = -1, j_max = 1, k_min = -3, k_max = 3;
  int rep_n = 8;
  std::int64_t m_range = 10;
  std::int64_t wiener = -1;
};

struct Result {
  json doc;
  std::optional<std::string> csv;
  std::optional<std::string> text;
};

std::string fmt_double(double x) {
  json j = x;
  return j.dump();
}

json scalar_json(const Scalar& s) {
  auto z = s.to_complex();
  json j;
  j["exact"] = s.is_exact() ? json(s.to_string()) : json(nullptr);
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json poly_json(const LaurentPolynomial& p) {
  json terms = json::array();
  for (const auto& [k, c] : p.coefficients()) {
    json t = scalar_json(c);
    t["k"] = k;
    terms.push_back(t);
  }
  return terms;
}

std::string rational_string(const Rational& q) { return q.get_str(); }

DigitSystem require_system(const Config& c) {
  if (c.scale == 0) throw Error(ErrorKind::Precondition, "--scale is required");
  if (c.digits.empty()) throw Error(ErrorKind::InvalidDigit, "--digits is required");
  return DigitSystem(c.scale, c.digits);
}

LaurentPolynomial filter_from(const Config& c) {
  if (c.scale < 2) throw Error(ErrorKind::Range, "--scale must be >= 2");
  LaurentPolynomial m = c.taps.empty() ? canonical_lowpass(require_system(c)) : equal_weight_filter(c.taps);
  static const std::regex shift_re("z(-?[0-9]+)");
  std::smatch mt;
  if (c.modifier == "none" || c.modifier.empty()) return m;
  if (c.modifier == "neg") return -m;
  if (std::regex_match(c.modifier, mt, shift_re)) return m.shifted(std::stoll(mt[1]));
  throw Error(ErrorKind::Precondition, "unknown --modifier '" + c.modifier + "' (none, neg, z<k>)");
}

json system_json(const DigitSystem& s) { return json{{"scale", s.scale()}, {"digits", s.digits()}}; }

// ---------------------------------------------------------------------------

Result run_dimension(const Config& c) {
  DigitSystem sys = require_system(c);
  Result r;
  r.doc["dimension"] = hausdorff_dimension(sys);
  r.text = "dimension " + fmt_double(hausdorff_dimension(sys)) + "\n";
  return r;
}

Result run_filters(const Config& c) {
  DigitSystem sys = require_system(c);
  FilterBank bank = build_bank(sys);
  UnitarityDefect d = unitarity_defect(bank);
  Result r;
  r.doc["system"] = system_json(sys);
  json filters = json::array();
  std::string text;
  for (std::size_t i = 0; i < bank.filters.size(); ++i) {
    filters.push_back(json{{"index", i}, {"exact", bank.filters[i].is_exact()}, {"terms", poly_json(bank.filters[i])}});
    text += "m" + std::to_string(i) + " = " + bank.filters[i].to_string() + "\n";
  }
  r.doc["filters"] = filters;
  r.doc["unitarity"] = json{{"exact", d.exact},
                            {"defect", d.value},
                            {"coefficient_residual", d.coefficient_residual},
                            {"sampled_residual", d.sampled_residual}};
  text += std::string("unitarity defect ") + (d.exact ? "0 (exact)" : fmt_double(d.value)) + "\n";
  r.text = text;
  return r;
}

Result run_spectrum(const Config& c) {
  LaurentPolynomial m = filter_from(c);
  TransferOperator op = TransferOperator::from_filter(m, c.scale);
  SpectralBlock blk = spectral_block(op);
  Result r;
  r.doc["scale"] = c.scale;
  r.doc["weight"] = poly_json(op.weight());
  r.doc["half_width"] = blk.half_width;
  r.doc["dimension"] = blk.dimension;
  json mat = json::array();
  for (std::size_t i = 0; i < blk.dimension; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < blk.dimension; ++j) row.push_back(blk.at(i, j).to_string());
    mat.push_back(row);
  }
  r.doc["matrix"] = mat;
  json ev = json::array();
  for (auto z : blk.eigenvalues) ev.push_back(complex_json(z));
  r.doc["eigenvalues"] = ev;
  r.doc["unit_multiplicity"] = blk.unit_multiplicity;
  r.doc["other_peripheral"] = blk.other_peripheral;
  r.doc["constant_fixed"] = blk.constant_fixed;
  r.doc["exact_fixed_dimension"] =
      blk.exact_fixed_dimension ? json(*blk.exact_fixed_dimension) : json(nullptr);
  r.doc["unit_simple"] = blk.unit_simple();
  std::ostringstream t;
  t << "D = " << blk.half_width << ", block dimension " << blk.dimension << "\neigenvalues:";
  for (auto z : blk.eigenvalues) t << " " << fmt_double(z.real()) << (z.imag() >= 0 ? "+" : "") << fmt_double(z.imag()) << "i";
  t << "\neigenvalue 1 simple: " << (blk.unit_simple() ? "yes" : "no")
    << ", other peripheral: " << (blk.other_peripheral ? "yes" : "no") << "\n";
  r.text = t.str();
  return r;
}

Result run_moments(const Config& c) {
  LaurentPolynomial m = filter_from(c);
  TransferOperator op = TransferOperator::from_filter(m, c.scale);
  MomentTable t = moment_table(op, c.range, MomentOptions{c.max_iter, c.moment_tol});
  std::int64_t wk = c.wiener < 0 ? c.range : std::min(c.wiener, c.range);
  WienerProfile wp = wiener_profile(t, wk);
  Result r;
  r.doc["scale"] = c.scale;
  r.doc["range"] = c.range;
  json rows = json::array();
  std::string csv = "n,re,im,status,exact\n";
  std::string text;
  for (const auto& [n, e] : t.entries) {
    json row = scalar_json(e.value);
    row["n"] = n;
    row["status"] = to_string(e.status);
    row["iterate"] = e.iterate;
    row["cesaro"] = e.cesaro;
    rows.push_back(row);
    auto z = e.value.to_complex();
    std::string ex = e.value.is_exact() ? e.value.to_string() : "";
    csv += std::to_string(n) + "," + fmt_double(z.real()) + "," + fmt_double(z.imag()) + "," + to_string(e.status) +
           "," + ex + "\n";
    text += std::to_string(n) + "  " + (ex.empty() ? fmt_double(z.real()) : ex) + "  " + to_string(e.status) + "\n";
  }
  r.doc["moments"] = rows;
  json wrows = json::array();
  for (const auto& w : wp.rows) {
    json row{{"k", w.k}};
    row["s"] = scalar_json(w.s);
    row["ratio"] = scalar_json(w.ratio);
    wrows.push_back(row);
  }
  r.doc["wiener"] = json{{"s0", scalar_json(wp.s0)}, {"unsettled", wp.unsettled}, {"rows", wrows}};
  r.csv = csv;
  r.text = text;
  return r;
}

json cycles_json(const CycleReport& rep) {
  json cycles = json::array();
  for (const auto& cy : rep.cycles) {
    json angles = json::array();
    for (const auto& a : cy.angles) angles.push_back(rational_string(a));
    cycles.push_back(json{{"length", cy.angles.size()}, {"angles", angles}, {"weight_values", cy.weight_values}});
  }
  return cycles;
}

Result run_cycles(const Config& c) {
  LaurentPolynomial m = filter_from(c);
  CycleReport rep = find_cycles(m, c.scale, c.max_length, c.tol);
  Result r;
  r.doc["scale"] = c.scale;
  r.doc["max_length"] = rep.max_length;
  r.doc["verdict"] = rep.found() ? "CyclesFound" : "NoCycles";
  r.doc["cycles"] = cycles_json(rep);
  std::string text = std::string(rep.found() ? "CyclesFound" : "NoCycles") + "\n";
  for (const auto& cy : rep.cycles) {
    text += "{";
    for (std::size_t i = 0; i < cy.angles.size(); ++i) text += (i ? ", " : "") + rational_string(cy.angles[i]);
    text += "}\n";
  }
  r.text = text;
  return r;
}

Result run_classify(const Config& c) {
  LaurentPolynomial m = filter_from(c);
  SupportClassification s = classify_support(m, c.scale, c.max_length, c.range);
  Result r;
  bool full = s.kind == SupportClassification::Kind::FullSupport;
  r.doc["scale"] = c.scale;
  r.doc["kind"] = full ? "FullSupport" : "AtomicOnCycles";
  r.doc["unique"] = s.unique;
  r.doc["diagnostics"] = s.diagnostics;
  r.doc["cycles"] = cycles_json(s.cycles);
  json measures = json::array();
  for (const auto& mu : s.measures) {
    json atoms = json::array();
    for (const auto& a : mu.atoms) atoms.push_back(rational_string(a));
    measures.push_back(json{{"atoms", atoms}, {"weight", rational_string(mu.weight)}});
  }
  r.doc["measures"] = measures;
  json moments = json::array();
  if (s.moments)
    for (const auto& [n, e] : s.moments->entries) {
      if (n < 0) continue;
      json row = scalar_json(e.value);
      row["n"] = n;
      row["status"] = to_string(e.status);
      moments.push_back(row);
    }
  r.doc["moments"] = moments;
  std::string text = std::string(full ? "FullSupport" : "AtomicOnCycles") + (s.unique ? " (unique)" : "") + "\n";
  for (const auto& d : s.diagnostics) text += "  " + d + "\n";
  r.text = text;
  return r;
}

json pair_json(const SpectralPair& pair) {
  json labels = json::array(), numeric = json::array();
  const auto& sys = pair.system;
  for (std::size_t j = 0; j < sys.count(); ++j) {
    json lrow = json::array(), nrow = json::array();
    for (std::size_t k = 0; k < sys.count(); ++k) {
      lrow.push_back(root_of_unity_label(sys.digits()[j] * pair.dual[k], sys.scale()));
      nrow.push_back(complex_json(pair.matrix.at(j, k)));
    }
    labels.push_back(lrow);
    numeric.push_back(nrow);
  }
  return json{{"scale", "1/√" + std::to_string(sys.count())}, {"entries", labels}, {"numeric", numeric}};
}

Result run_duality(const Config& c) {
  DigitSystem sys = require_system(c);
  SpectralPair pair = dual_matrix(sys, c.dual);
  Result r;
  r.doc["system"] = system_json(sys);
  r.doc["dual"] = c.dual;
  r.doc["matrix"] = pair_json(pair);
  r.doc["exact_unitary"] = pair.exact_unitary;
  r.doc["defect"] = pair.defect;
  r.doc["verdict"] = pair.is_dual() ? "Dual" : "NotDual";
  std::string text = std::string("verdict ") + (pair.is_dual() ? "Dual" : "NotDual") + ", defect " +
                     fmt_double(pair.defect) + "\n";
  if (pair.is_dual()) {
    LambdaSet lam = lambda_set(pair, c.count);
    r.doc["lambda"] = json{{"prefix", lam.prefix}, {"signed_digits", lam.signed_digits}, {"depth", lam.depth}};
    text += "Lambda prefix:";
    for (auto x : lam.prefix) text += " " + std::to_string(x);
    text += "\n";
  } else {
    r.doc["lambda"] = nullptr;
  }
  int k = std::min(c.max_length, 12);
  BCycleReport bc = b_cycles(pair, k, c.tol);
  json cycles = json::array();
  for (const auto& cy : bc.cycles) {
    json pts = json::array();
    for (const auto& p : cy.points) pts.push_back(rational_string(p));
    cycles.push_back(json{{"word", cy.word}, {"points", pts}, {"trivial", cy.trivial()}});
  }
  r.doc["b_cycles"] = json{{"max_length", bc.max_length}, {"trivial_only", bc.trivial_only()}, {"cycles", cycles}};
  text += std::string("B-cycles: ") + std::to_string(bc.cycles.size()) + (bc.trivial_only() ? " (trivial only)" : "") + "\n";
  r.text = text;
  return r;
}

Result run_onb_check(const Config& c) {
  DigitSystem sys = require_system(c);
  Result r;
  r.doc["system"] = system_json(sys);
  std::vector<std::int64_t> exps = c.exponents;
  std::optional<SpectralPair> pair;
  if (!c.dual.empty()) {
    pair = dual_matrix(sys, c.dual);
    r.doc["verdict"] = pair->is_dual() ? "Dual" : "NotDual";
    if (exps.empty() && pair->is_dual()) exps = lambda_set(*pair, c.count).prefix;
  }
  if (exps.empty())
    for (std::size_t i = 0; i < c.count; ++i) exps.push_back(static_cast<std::int64_t>(i));
  ComplexMatrix g = exponential_gram(sys, exps, c.depth);
  auto triple = find_orthogonal_triple(g, 1e-6);
  json gm = json::array();
  for (std::size_t i = 0; i < g.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < g.cols; ++j) row.push_back(complex_json(g.at(i, j)));
    gm.push_back(row);
  }
  r.doc["gram"] = json{{"exponents", exps},
                       {"depth", c.depth},
                       {"identity_distance", g.identity_distance()},
                       {"orthogonal_triple", triple ? json(*triple) : json(nullptr)},
                       {"matrix", gm}};
  std::string text = "Gram identity distance " + fmt_double(g.identity_distance()) + "\n" +
                     "orthogonal triple: " + (triple ? "yes" : "none") + "\n";
  if (pair && pair->is_dual()) {
    OnbPartialSums s = onb_defect(*pair, c.xi, c.sums, c.depth);
    r.doc["partial_sums"] = json{{"xi", c.xi},
                                 {"count", s.partial.size()},
                                 {"monotone", s.monotone},
                                 {"max", s.max_partial},
                                 {"final", s.partial.empty() ? 0.0 : s.partial.back()},
                                 {"sums", s.partial}};
    text += "partial sums at xi=" + fmt_double(c.xi) + ": final " +
            fmt_double(s.partial.empty() ? 0.0 : s.partial.back()) + (s.monotone ? " (monotone)" : "") + "\n";
  }
  r.text = text;
  return r;
}

Result run_cascade(const Config& c) {
  DigitSystem sys = require_system(c);
  LaurentPolynomial m = filter_from(c);
  auto rows = cascade_experiment(sys, m, c.steps);
  Result r;
  r.doc["system"] = system_json(sys);
  r.doc["filter"] = poly_json(m);
  json out = json::array();
  std::string csv = "n,norm_sq,inner_re,inner_im,norm_sq_exact,inner_exact\n";
  std::string text;
  for (const auto& row : rows) {
    json j{{"n", row.n}};
    j["norm_sq"] = scalar_json(row.norm_sq);
    j["inner"] = scalar_json(row.inner);
    j["transfer_inner"] = scalar_json(row.transfer_inner);
    j["consistent"] = row.consistent;
    out.push_back(j);
    auto ns = row.norm_sq.to_complex();
    auto ip = row.inner.to_complex();
    csv += std::to_string(row.n) + "," + fmt_double(ns.real()) + "," + fmt_double(ip.real()) + "," +
           fmt_double(ip.imag()) + "," + (row.norm_sq.is_exact() ? row.norm_sq.to_string() : "") + "," +
           (row.inner.is_exact() ? row.inner.to_string() : "") + "\n";
    text += std::to_string(row.n) + "  |d|^2=" + row.norm_sq.to_string() + "  <,>=" + row.inner.to_string() + "\n";
  }
  r.doc["rows"] = out;
  r.csv = csv;
  r.text = text;
  return r;
}

Result run_riesz(const Config& c) {
  auto samples = riesz_samples(c.riesz_n, c.grid);
  double mass = 0.0;
  for (const auto& s : samples) mass += s.value;
  mass *= 2.0 * 3.141592653589793238462643383279502884 / static_cast<double>(c.grid);
  Result r;
  r.doc["n"] = c.riesz_n;
  r.doc["grid"] = c.grid;
  r.doc["mass"] = mass;
  json pts = json::array();
  std::string csv = "t,value\n";
  for (const auto& s : samples) {
    pts.push_back(json::array({s.t, s.value}));
    csv += fmt_double(s.t) + "," + fmt_double(s.value) + "\n";
  }
  r.doc["samples"] = pts;
  r.csv = csv;
  r.text = "Riesz partial product n=" + std::to_string(c.riesz_n) + " on " + std::to_string(c.grid) +
           " points, mass " + fmt_double(mass) + "\n";
  return r;
}

Result run_gram(const Config& c) {
  DigitSystem sys = require_system(c);
  auto gens = wavelet_generators(sys);
  GramSection g = gram_section(gens, c.j_min, c.j_max, c.k_min, c.k_max);
  Result r;
  r.doc["system"] = system_json(sys);
  r.doc["size"] = g.size();
  r.doc["exact_identity"] = g.is_exact_identity();
  r.doc["identity_distance"] = g.identity_distance();
  json labels = json::array();
  for (const auto& l : g.labels) labels.push_back(json::array({l.generator, l.scale, l.translate}));
  r.doc["labels"] = labels;
  json generators = json::array();
  for (const auto& v : gens) generators.push_back(json::parse(to_json(v)));
  r.doc["generators"] = generators;
  r.text = "Gram section of " + std::to_string(g.size()) + " vectors: " +
           (g.is_exact_identity() ? "exact identity" : "distance " + fmt_double(g.identity_distance())) + "\n";
  return r;
}

Result run_table(const Config&) {
  auto rows = duality_tables();
  Result r;
  r.doc = json::parse(tables_json(rows));
  r.text = tables_text(rows);
  return r;
}

Result run_replimit(const Config& c) {
  DigitSystem sys = require_system(c);
  LaurentPolynomial m = filter_from(c);
  TransferOperator op = TransferOperator::from_filter(m, c.scale);
  MomentTable t = moment_table(op, c.m_range);
  Result r;
  r.doc["system"] = system_json(sys);
  r.doc["n"] = c.rep_n;
  json rows = json::array();
  std::string text;
  for (std::int64_t mm = -c.m_range; mm <= c.m_range; ++mm) {
    Scalar v = representation_limit(sys, m, c.rep_n, mm);
    const Scalar& nu = t.at(mm);
    json row{{"m", mm}};
    row["value"] = scalar_json(v);
    row["moment"] = scalar_json(nu);
    row["difference"] = std::abs((v - nu).to_complex());
    rows.push_back(row);
    text += std::to_string(mm) + "  " + v.to_string() + "  " + nu.to_string() + "\n";
  }
  r.doc["rows"] = rows;
  r.text = text;
  return r;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::CapExceeded:
    case ErrorKind::Range: return kExitCap;
    default: return kExitPrecondition;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && argv[1][0] != '-' &&
      std::find(kSubcommands.begin(), kSubcommands.end(), std::string(argv[1])) == kSubcommands.end()) {
    std::cerr << "error: unknown subcommand '" << argv[1] << "'\n";
    return kExitUnknown;
  }

  CLI::App app{"Multiresolution analysis on affine Cantor-type fractals"};
  app.require_subcommand(1);
  Config c;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();
    s->add_option("--output,-o", c.output, "Write output to this file instead of stdout");
    s->add_option("--seed", c.seed, "Seed (reserved for randomized sweeps)")->capture_default_str();
  };
  auto add_system = [&](CLI::App* s) {
    s->add_option("--scale,-N", c.scale, "Scale N >= 2");
    s->add_option("--digits,-S", c.digits, "Digit set, comma separated")->delimiter(',');
  };
  auto add_filter = [&](CLI::App* s) {
    add_system(s);
    s->add_option("--taps", c.taps, "Equal-weight filter taps instead of the canonical low-pass")->delimiter(',');
    s->add_option("--modifier", c.modifier, "Filter modifier: none, neg, z<k>")->capture_default_str();
  };

  auto* dim = app.add_subcommand("dimension", "Hausdorff dimension log_N p");
  add_system(dim);
  add_common(dim);

  auto* fil = app.add_subcommand("filters", "Filter bank and its unitarity defect");
  add_system(fil);
  add_common(fil);

  auto* spec = app.add_subcommand("spectrum", "Transfer operator block and its eigenvalues");
  add_filter(spec);
  add_common(spec);

  auto* mom = app.add_subcommand("moments", "Invariant-measure moments and Wiener averages");
  add_filter(mom);
  add_common(mom);
  mom->add_option("--range", c.range, "Moments for |n| <= range")->capture_default_str();
  mom->add_option("--max-iter", c.max_iter, "Iteration cap")->capture_default_str();
  mom->add_option("--tol", c.moment_tol, "Convergence tolerance")->capture_default_str();
  mom->add_option("--wiener", c.wiener, "Wiener profile length (default: range)");

  auto* cyc = app.add_subcommand("cycles", "Cycles of z -> z^N where |m0|^2 = N");
  add_filter(cyc);
  add_common(cyc);
  cyc->add_option("--max-length,-L", c.max_length, "Maximal cycle length")->capture_default_str();
  cyc->add_option("--tol", c.tol, "Tolerance on |m0|^2 = N")->capture_default_str();

  auto* cls = app.add_subcommand("classify", "Support of the invariant measure");
  add_filter(cls);
  add_common(cls);
  cls->add_option("--max-length,-L", c.max_length, "Maximal cycle length")->capture_default_str();
  cls->add_option("--range", c.range, "Moment range for the full-support case")->capture_default_str();

  auto* dua = app.add_subcommand("duality", "Dual matrix, Lambda prefix and B-cycles");
  add_system(dua);
  add_common(dua);
  dua->add_option("--dual,-B", c.dual, "Dual digit set B")->delimiter(',')->required();
  dua->add_option("--count", c.count, "Lambda prefix length")->capture_default_str();
  dua->add_option("--max-length,-K", c.max_length, "B-cycle word length cap (at most 12)");
  dua->add_option("--tol", c.tol, "Tolerance on |m0|^2 = p")->capture_default_str();

  auto* onb = app.add_subcommand("onb-check", "Exponential Gram matrix and ONB partial sums");
  add_system(onb);
  add_common(onb);
  onb->add_option("--dual,-B", c.dual, "Dual digit set B (exponents from Lambda)")->delimiter(',');
  onb->add_option("--exponents", c.exponents, "Explicit exponents")->delimiter(',');
  onb->add_option("--count", c.count, "Number of exponents")->capture_default_str();
  onb->add_option("--xi", c.xi, "Point for the partial sums")->capture_default_str();
  onb->add_option("--sums", c.sums, "Number of partial-sum terms")->capture_default_str();
  onb->add_option("--depth", c.depth, "Product depth for B(k)")->capture_default_str();

  auto* cas = app.add_subcommand("cascade", "Cascade iterates M^n phi");
  add_filter(cas);
  add_common(cas);
  cas->add_option("--steps", c.steps, "Number of steps (at most 12)")->capture_default_str();

  auto* rie = app.add_subcommand("riesz", "Samples of the Riesz partial product");
  add_common(rie);
  rie->add_option("--n", c.riesz_n, "Number of factors")->capture_default_str();
  rie->add_option("--grid", c.grid, "Grid size")->capture_default_str();

  auto* gra = app.add_subcommand("gram", "Gram section of dilated/translated wavelets");
  add_system(gra);
  add_common(gra);
  gra->add_option("--j-min", c.j_min, "Lowest dilation level j")->capture_default_str();
  gra->add_option("--j-max", c.j_max, "Highest dilation level j")->capture_default_str();
  gra->add_option("--k-min", c.k_min, "Lowest translate k")->capture_default_str();
  gra->add_option("--k-max", c.k_max, "Highest translate k")->capture_default_str();

  auto* tab = app.add_subcommand("table", "Duality tables");
  add_common(tab);

  auto* rep = app.add_subcommand("replimit", "Representation limit <phi, U^-n z^m(T) U^n phi>");
  add_filter(rep);
  add_common(rep);
  rep->add_option("--n", c.rep_n, "Dilation power (at most 12)")->capture_default_str();
  rep->add_option("--m-range", c.m_range, "Exponents |m| <= m-range")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitPrecondition;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    Result r;
    if (name == "dimension") r = run_dimension(c);
    else if (name == "filters") r = run_filters(c);
    else if (name == "spectrum") r = run_spectrum(c);
    else if (name == "moments") r = run_moments(c);
    else if (name == "cycles") r = run_cycles(c);
    else if (name == "classify") r = run_classify(c);
    else if (name == "duality") r = run_duality(c);
    else if (name == "onb-check") r = run_onb_check(c);
    else if (name == "cascade") r = run_cascade(c);
    else if (name == "riesz") r = run_riesz(c);
    else if (name == "gram") r = run_gram(c);
    else if (name == "table") r = run_table(c);
    else if (name == "replimit") r = run_replimit(c);

    std::string body;
    if (c.format == "json") {
      body = r.doc.dump(2) + "\n";
    } else if (c.format == "csv") {
      if (!r.csv) throw Error(ErrorKind::Precondition, "csv output is not available for '" + name + "'");
      body = *r.csv;
    } else {
      body = r.text ? *r.text : r.doc.dump(2) + "\n";
    }
    if (c.output.empty()) {
      std::cout << body;
    } else {
      std::ofstream f(c.output, std::ios::binary);
      if (!f) throw Error(ErrorKind::Precondition, "cannot open output file " + c.output);
      f << body;
    }
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
}
