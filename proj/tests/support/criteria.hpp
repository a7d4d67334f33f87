#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace testsupport {

/// Outcome of one acceptance check.
struct CriterionResult {
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

/// Time limits for the timed checks.
inline constexpr double golden_time_limit_s = 5.0;
inline constexpr double chain_time_limit_s = 10.0;
inline constexpr std::size_t golden_minimum_pairs = 35;
inline constexpr int chain_count = 200;
inline constexpr int chain_max_depth = 4;
inline constexpr unsigned long long chain_seed = 20211213;

/// Every golden pair translates to a module structurally equal to its
/// expected text.
CriterionResult check_golden_corpus();

/// The four attribute example signatures: propagation of f1, erasure counts and
/// idempotence of propagation.
CriterionResult check_attribute_examples();

/// Random let-before chains evaluate equally before and after translation.
CriterionResult check_chain_semantics();

/// Fresh names never meet the names of the source clause.
CriterionResult check_chain_hygiene();

/// Every emitted pragma has a demanding construct and plain modules carry
/// none.
CriterionResult check_pragma_minimality();

/// Emitting, re-reading and emitting again reproduces the text.
CriterionResult check_round_trip();

/// The two-module export example and the standalone case.
CriterionResult check_linker_example();

/// Generic stubs and both Start forms.
CriterionResult check_generics_and_start();

/// Module with the four attribute example signatures f1..f4.
const std::string& attribute_examples_source();

}  // namespace testsupport
