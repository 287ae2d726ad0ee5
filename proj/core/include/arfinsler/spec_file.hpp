#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arfinsler/metrics.hpp"

namespace arf {

/// Contents of a metric definition file.
///
/// The file is a list of `key = value` statements separated by newlines or
/// semicolons; `#` starts a comment. Values are rational expressions in
/// x1..xn, y1..yn (and `theta` inside F2), or bracketed lists of them:
///
///   value := expr | '[' value {',' value} ']'
///   expr  := term {('+' | '-') term}
///   term  := unary {('*' | '/') unary}
///   unary := ('+' | '-') unary | power
///   power := atom ['^' ['-'] integer | '^' '(' ['-'] integer ')']
///   atom  := integer | variable | '(' expr ')'
///
/// `family` and `weyl` take a bare word. `mu[i,j,k]` sets one coefficient of
/// a root metric (1-based indices, any order).
struct MetricSpec {
  int n = 0;
  std::string family;
  std::optional<std::vector<std::vector<RatFn>>> alpha;
  std::optional<std::vector<RatFn>> b;
  std::optional<int> k;
  std::optional<int> m;
  std::optional<RatFn> A;
  std::map<std::vector<int>, RatFn> mu;
  std::optional<mpq_class> phi_a, phi_b;
  std::optional<int> phi_k, phi_m;
  std::optional<RatFn> sigma;
  /// Raw family: F^2 over the kernel theta^m = A (trivial kernel without m).
  std::optional<FieldElem> F2;
  std::vector<std::vector<mpq_class>> points;
  std::optional<WeylVariant> weyl;
  std::optional<unsigned> precision;

  friend bool operator==(const MetricSpec& a, const MetricSpec& b);
};

const std::vector<std::string>& spec_families();

/// Throws ParseError (with line and column) on malformed input or unknown
/// keys, ArityError on wrongly shaped lists and InvalidArgument when a
/// family misses a required key.
MetricSpec parse_metric_file(std::string_view text);

/// Canonical text form; parse_metric_file(print_metric_file(s)) == s.
std::string print_metric_file(const MetricSpec& spec);

/// Runs the family constructor.
MetricInstance build_instance(const MetricSpec& spec);

}  // namespace arf
