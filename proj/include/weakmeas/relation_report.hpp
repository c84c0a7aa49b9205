#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "weakmeas/linalg.hpp"

namespace wm {

enum class RelationId { ur1, ur2, mp1, mp2, robertson, conjugate_pair, complementarity };
enum class Sign { plus, minus };
enum class PsibarMode { none, optimal, supplied, random };

std::string_view to_string(RelationId id);
std::string_view to_string(Sign s);
std::string_view to_string(PsibarMode m);
RelationId relation_from_string(std::string_view s);
Sign sign_from_string(std::string_view s);
PsibarMode psibar_mode_from_string(std::string_view s);

inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

struct NamedTerm {
  std::string name;
  double value = 0.0;
  friend bool operator==(const NamedTerm&, const NamedTerm&) = default;
};

struct NamedFingerprint {
  std::string name;
  Fingerprint value = 0;
  friend bool operator==(const NamedFingerprint&, const NamedFingerprint&) = default;
};

/// One evaluated instance of an inequality: lhs >= rhs_total.
struct RelationReport {
  RelationId relation = RelationId::ur1;
  double lhs = 0.0;
  std::vector<NamedTerm> rhs_terms;
  double rhs_total = 0.0;
  double slack = 0.0;
  std::optional<Sign> sign;
  PsibarMode psibar_mode = PsibarMode::none;
  bool tight = false;
  // Largest imaginary part discarded from a quantity that is real in exact arithmetic.
  double imag_residue = 0.0;
  std::vector<NamedFingerprint> fingerprints;
  // Auxiliary values that are not part of rhs_total (closed forms, discrepancies).
  std::vector<NamedTerm> diagnostics;
  std::vector<std::string> notes;

  /// slack >= -tolerance * max(1, |lhs|)
  bool verified(double tolerance) const;
  std::optional<double> term(std::string_view name) const;
  std::optional<double> diagnostic(std::string_view name) const;

  friend bool operator==(const RelationReport&, const RelationReport&) = default;
};

/// The absolute scale against which relation tolerances are applied.
inline double relation_scale(double lhs) { return lhs > 1.0 ? lhs : (lhs < -1.0 ? -lhs : 1.0); }

}  // namespace wm
