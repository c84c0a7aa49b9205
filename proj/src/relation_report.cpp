#include "weakmeas/relation_report.hpp"

#include <array>
#include <string>

#include "weakmeas/errors.hpp"

namespace wm {

namespace {

constexpr std::array kRelationNames{
    std::pair{RelationId::ur1, std::string_view{"ur1"}},
    std::pair{RelationId::ur2, std::string_view{"ur2"}},
    std::pair{RelationId::mp1, std::string_view{"mp1"}},
    std::pair{RelationId::mp2, std::string_view{"mp2"}},
    std::pair{RelationId::robertson, std::string_view{"robertson"}},
    std::pair{RelationId::conjugate_pair, std::string_view{"conjugate_pair"}},
    std::pair{RelationId::complementarity, std::string_view{"complementarity"}},
};

constexpr std::array kModeNames{
    std::pair{PsibarMode::none, std::string_view{"none"}},
    std::pair{PsibarMode::optimal, std::string_view{"optimal"}},
    std::pair{PsibarMode::supplied, std::string_view{"supplied"}},
    std::pair{PsibarMode::random, std::string_view{"random"}},
};

template <typename Table, typename Key>
std::string_view lookup_name(const Table& table, Key key) {
  for (const auto& [k, name] : table)
    if (k == key) return name;
  return "unknown";
}

template <typename Table>
auto lookup_key(const Table& table, std::string_view name, const char* what) {
  for (const auto& [k, n] : table)
    if (n == name) return k;
  throw Error(ErrorKind::config, std::string("unknown ") + what + " '" + std::string(name) + "'");
}

}  // namespace

std::string_view to_string(RelationId id) { return lookup_name(kRelationNames, id); }
std::string_view to_string(PsibarMode m) { return lookup_name(kModeNames, m); }
std::string_view to_string(Sign s) { return s == Sign::plus ? "+" : "-"; }

RelationId relation_from_string(std::string_view s) { return lookup_key(kRelationNames, s, "relation"); }
PsibarMode psibar_mode_from_string(std::string_view s) { return lookup_key(kModeNames, s, "psibar mode"); }

Sign sign_from_string(std::string_view s) {
  if (s == "+") return Sign::plus;
  if (s == "-") return Sign::minus;
  throw Error(ErrorKind::config, "unknown sign '" + std::string(s) + "'");
}

bool RelationReport::verified(double tolerance) const {
  return slack >= -tolerance * relation_scale(lhs);
}

std::optional<double> RelationReport::term(std::string_view name) const {
  for (const auto& t : rhs_terms)
    if (t.name == name) return t.value;
  return std::nullopt;
}

std::optional<double> RelationReport::diagnostic(std::string_view name) const {
  for (const auto& t : diagnostics)
    if (t.name == name) return t.value;
  return std::nullopt;
}

}  // namespace wm
