#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uast/core.hpp"

namespace uast {

enum class Verbosity { Terse, Normal, Verbose };

struct GenOptions {
  uint64_t seed = 0;
  Verbosity verbosity = Verbosity::Normal;
};

struct GenResult {
  std::vector<std::string> tokens;
  int statement_nodes_total = 0;     // statement positions in the program
  int statement_nodes_rendered = 0;  // positions that produced a clause
  std::vector<std::string> fallbacks;  // nodes rendered literally

  std::string text() const;
};

// Imperative English rendering of the program, deterministic in (p, seed):
// same pair, same tokens. Distinct seeds draw different phrase synonyms and
// clause shapes.
GenResult generate_statement(const Program& p, const GenOptions& options = {});

// n statements from seeds base_seed .. base_seed + n - 1.
std::vector<GenResult> generate_batch(const Program& p, int n, uint64_t base_seed,
                                      Verbosity verbosity = Verbosity::Normal);

double mean_token_length(const std::vector<GenResult>& batch);

}  // namespace uast
