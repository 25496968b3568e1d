#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fractalmra/duality.hpp"

namespace fractalmra {

struct TransferBranch {
  std::int64_t digit;
  std::string weight;    // (1/p)|m₀((ξ − b)/N)|² in closed form
  std::string argument;  // (ξ − b)/N
};

struct DualityTableRow {
  explicit DualityTableRow(SpectralPair p) : pair(std::move(p)) {}

  SpectralPair pair;
  std::string matrix_scale;                      // "1/√p"
  std::vector<std::vector<std::string>> matrix;  // root-of-unity labels
  double dimension = 0.0;
  std::string dimension_label;  // "1/2" or "log_6(2)"
  std::vector<std::int64_t> lambda_prefix;
  std::vector<std::int64_t> reference_prefix;
  bool reference_prefix_consistent = false;
  std::vector<TransferBranch> branches;
  double formula_max_error = 0.0;  // closed form vs branch expansion, sampled
};

/// The four (N, S, B) rows with matrices, dimensions, Λ prefixes and the
/// dual transfer operator.
std::vector<DualityTableRow> duality_tables();

/// "1/2" when log_N p is rational, else "log_N(p)".
std::string dimension_label(int scale, std::size_t p);

std::string tables_json(const std::vector<DualityTableRow>& rows);
std::string tables_text(const std::vector<DualityTableRow>& rows);

}  // namespace fractalmra
