#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cuba/model.hpp"

namespace cuba {

/// One `bad:` line. A disengaged position is the wildcard `*`; an engaged
/// top position may hold kEmptyTop for `eps`.
struct VisiblePattern {
  std::optional<SharedId> q;
  std::vector<std::optional<SymbolId>> tops;

  friend bool operator==(const VisiblePattern &,
                         const VisiblePattern &) = default;
};

/// A safety property: the set of bad visible states, as a list of patterns.
struct PropertySpec {
  std::vector<VisiblePattern> patterns;

  bool empty() const { return patterns.empty(); }
  friend bool operator==(const PropertySpec &, const PropertySpec &) = default;
};

bool matches(const PropertySpec &p, const VisibleState &v);

struct SourceDiagnostic {
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public InputError {
 public:
  explicit SyntaxError(SourceDiagnostic d);
  const SourceDiagnostic &diagnostic() const { return diag_; }

 private:
  SourceDiagnostic diag_;
};

class ValidationError : public InputError {
 public:
  explicit ValidationError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic> &diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

struct ParsedInput {
  Cpds cpds;
  PropertySpec property;
};

/// Parses the CPDS text format. Wildcard rules are expanded to ground
/// actions and duplicates dropped. Throws SyntaxError or ValidationError.
ParsedInput parse_cpds(std::string_view text);

ParsedInput parse_cpds_file(const std::string &path);

std::string serialize_cpds(const Cpds &c, const PropertySpec &p);

std::string format_pattern(const Cpds &c, const VisiblePattern &p);

}  // namespace cuba
