#include "fractalmra/tables.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "fractalmra/filterbank.hpp"
#include "fractalmra/laurent.hpp"

namespace fractalmra {

namespace {

struct RowSpec {
  int scale;
  std::vector<int> digits;
  std::vector<std::int64_t> dual;
  std::vector<std::int64_t> reference;
};

const std::vector<RowSpec>& row_specs() {
  static const std::vector<RowSpec> rows{
      {4, {0, 2}, {0, 1}, {0, 1, 4, 5, 16, 17, 20, 21}},
      {6, {0, 3}, {0, 1}, {0, 1, 6, 7, 36, 37, 42, 43}},
      {6, {0, 1}, {0, 3}, {0, 3, 6, 9, 36, 39, 42, 45}},
      {6, {0, 2, 4}, {0, 1, 2}, {0, 1, 2, 6, 7, 8, 36, 37, 38, 42, 43, 44}},
  };
  return rows;
}

std::string shifted_xi(std::int64_t b) {
  if (b == 0) return "ξ";
  return b > 0 ? "(ξ-" + std::to_string(b) + ")" : "(ξ+" + std::to_string(-b) + ")";
}

// (u/v)·π·(ξ − b) with u/v = num/den reduced.
std::string angle(std::int64_t num, std::int64_t den, std::int64_t b) {
  std::int64_t g = std::gcd(num, den);
  num /= g;
  den /= g;
  std::string s = (num == 1 ? "" : std::to_string(num)) + "π" + shifted_xi(b);
  if (den != 1) s += "/" + std::to_string(den);
  return s;
}

bool arithmetic_progression(const std::vector<int>& d) {
  if (d.size() < 2 || d[0] != 0) return false;
  for (std::size_t i = 1; i < d.size(); ++i)
    if (d[i] != static_cast<int>(i) * d[1]) return false;
  return true;
}

// Closed form of θ ↦ (1/p)|m₀(θ)|² and its text for one branch.
std::pair<std::function<double(double)>, std::string> branch_weight(const DigitSystem& sys, std::int64_t b) {
  const auto& d = sys.digits();
  const int n = sys.scale();
  if (d.size() == 2 && d[0] == 0) {
    const double s = d[1];
    return {[s](double th) { return std::pow(std::cos(std::numbers::pi * s * th), 2); },
            "cos^2(" + angle(d[1], n, b) + ")"};
  }
  if (d.size() == 3 && arithmetic_progression(d)) {
    const double step = d[1];
    return {[step](double th) { return std::pow(1.0 + 2.0 * std::cos(2.0 * std::numbers::pi * step * th), 2) / 9.0; },
            "(1+2cos(" + angle(2 * d[1], n, b) + "))^2/9"};
  }
  LaurentPolynomial m0 = canonical_lowpass(sys);
  const double p = static_cast<double>(sys.count());
  return {[m0, p](double th) { return std::norm(m0.evaluate_turns(th)) / p; },
          "|Σ_{a∈S} e(a" + shifted_xi(b) + "/" + std::to_string(n) + ")|^2/" + std::to_string(sys.count() * sys.count())};
}

std::string format_list(const std::vector<std::int64_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++w;
  return w;
}

std::string pad(const std::string& s, std::size_t w) {
  std::size_t dw = display_width(s);
  return s + std::string(w > dw ? w - dw : 0, ' ');
}

std::string render_aligned(const std::vector<std::vector<std::string>>& cells) {
  std::vector<std::size_t> widths;
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (widths.size() <= i) widths.push_back(0);
      widths[i] = std::max(widths[i], display_width(row[i]));
    }
  std::string out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) line += (i ? "  " : "") + (i + 1 < row.size() ? pad(row[i], widths[i]) : row[i]);
    out += line + "\n";
  }
  return out;
}

}  // namespace

std::string dimension_label(int scale, std::size_t p) {
  if (p == 1) return "0";
  // log_N p = r/s exactly when p^s = N^r.
  for (int s = 1; s <= 16; ++s)
    for (int r = 1; r <= s; ++r) {
      double lhs = s * std::log(static_cast<double>(p));
      double rhs = r * std::log(static_cast<double>(scale));
      if (std::abs(lhs - rhs) > 1e-9) continue;
      // Confirm with integers.
      __int128 a = 1, b = 1;
      for (int i = 0; i < s; ++i) a *= static_cast<__int128>(p);
      for (int i = 0; i < r; ++i) b *= scale;
      if (a != b) continue;
      int g = std::gcd(r, s);
      return s / g == 1 ? std::to_string(r / g) : std::to_string(r / g) + "/" + std::to_string(s / g);
    }
  return "log_" + std::to_string(scale) + "(" + std::to_string(p) + ")";
}

std::vector<DualityTableRow> duality_tables() {
  std::vector<DualityTableRow> out;
  for (const auto& spec : row_specs()) {
    DigitSystem sys(spec.scale, spec.digits);
    DualityTableRow row(dual_matrix(sys, spec.dual));
    const std::size_t p = sys.count();
    row.matrix_scale = "1/√" + std::to_string(p);
    for (std::size_t j = 0; j < p; ++j) {
      std::vector<std::string> r;
      for (std::size_t k = 0; k < p; ++k)
        r.push_back(root_of_unity_label(sys.digits()[j] * spec.dual[k], spec.scale));
      row.matrix.push_back(std::move(r));
    }
    row.dimension = hausdorff_dimension(sys);
    row.dimension_label = dimension_label(spec.scale, p);
    row.lambda_prefix = lambda_set(row.pair, spec.reference.size()).prefix;
    row.reference_prefix = spec.reference;
    row.reference_prefix_consistent = row.lambda_prefix == spec.reference;

    std::vector<std::function<double(double)>> weights;
    for (auto b : spec.dual) {
      auto [fn, text] = branch_weight(sys, b);
      weights.push_back(fn);
      std::string arg = (b == 0 ? std::string("ξ") : shifted_xi(b)) + "/" + std::to_string(spec.scale);
      row.branches.push_back(TransferBranch{b, text, arg});
    }
    auto f = [](double x) { return std::cos(3.0 * x) + x * x; };
    for (int i = 0; i < 16; ++i) {
      double xi = -2.0 + 0.37 * i;
      double closed = 0.0;
      for (std::size_t k = 0; k < p; ++k) {
        double th = (xi - static_cast<double>(spec.dual[k])) / spec.scale;
        closed += weights[k](th) * f(th);
      }
      row.formula_max_error = std::max(row.formula_max_error, std::abs(closed - dual_transfer_eval(row.pair, f, xi, 1)));
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string tables_json(const std::vector<DualityTableRow>& rows) {
  using nlohmann::json;
  json pairs = json::array(), spectra = json::array(), transfer = json::array();
  for (const auto& r : rows) {
    const auto& sys = r.pair.system;
    json base{{"N", sys.scale()}, {"p", sys.count()}, {"S", sys.digits()}, {"B", r.pair.dual}};
    json pr = base;
    pr["matrix"] = {{"scale", r.matrix_scale}, {"entries", r.matrix}};
    pr["exact_unitary"] = r.pair.exact_unitary;
    pr["defect"] = r.pair.defect;
    pr["dimension"] = r.dimension;
    pr["dimension_label"] = r.dimension_label;
    pairs.push_back(pr);

    json sp = base;
    sp["prefix"] = r.lambda_prefix;
    sp["reference_prefix"] = r.reference_prefix;
    sp["reference_prefix_consistent"] = r.reference_prefix_consistent;
    spectra.push_back(sp);

    json tr = base;
    json branches = json::array();
    for (const auto& b : r.branches) branches.push_back({{"b", b.digit}, {"weight", b.weight}, {"argument", b.argument}});
    tr["branches"] = branches;
    tr["formula_max_error"] = r.formula_max_error;
    transfer.push_back(tr);
  }
  json out{{"tables", {{"dual_pairs", pairs}, {"spectra", spectra}, {"dual_transfer", transfer}}}};
  return out.dump(2) + "\n";
}

std::string tables_text(const std::vector<DualityTableRow>& rows) {
  std::vector<std::vector<std::string>> t1{{"N", "p", "S", "B", "M_N(S,B)", "dimension"}};
  std::vector<std::vector<std::string>> t2{{"N", "p", "B", "Lambda prefix", "reference", "consistent"}};
  std::vector<std::vector<std::string>> t3{{"N", "p", "B", "(R_B f)(ξ)"}};
  for (const auto& r : rows) {
    const auto& sys = r.pair.system;
    std::vector<std::int64_t> digits(sys.digits().begin(), sys.digits().end());
    std::string mat = r.matrix_scale + " [";
    for (std::size_t j = 0; j < r.matrix.size(); ++j) {
      mat += j ? "; " : "";
      for (std::size_t k = 0; k < r.matrix[j].size(); ++k) mat += (k ? " " : "") + r.matrix[j][k];
    }
    mat += "]";
    std::ostringstream dim;
    dim.precision(16);
    dim << r.dimension_label << " = " << r.dimension;
    std::string n = std::to_string(sys.scale()), p = std::to_string(sys.count());
    t1.push_back({n, p, format_list(digits), format_list(r.pair.dual), mat, dim.str()});
    t2.push_back({n, p, format_list(r.pair.dual), format_list(r.lambda_prefix), format_list(r.reference_prefix),
                  r.reference_prefix_consistent ? "yes" : "no"});
    std::string formula;
    for (std::size_t i = 0; i < r.branches.size(); ++i)
      formula += (i ? " + " : "") + r.branches[i].weight + " f(" + r.branches[i].argument + ")";
    t3.push_back({n, p, format_list(r.pair.dual), formula});
  }
  return render_aligned(t1) + "\n" + render_aligned(t2) + "\n" + render_aligned(t3);
}

}  // namespace fractalmra
