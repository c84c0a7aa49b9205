#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "weakmeas/errors.hpp"
#include "weakmeas/harness.hpp"

namespace wm {

namespace {

using ojson = nlohmann::ordered_json;

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void dump_value(const ojson& j, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case ojson::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_value(v, indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += ojson(k).dump();
        out += indent < 0 ? ":" : ": ";
        dump_value(v, indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    default:
      out += j.dump();
  }
}

std::string hex(Fingerprint f) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016" PRIx64, f);
  return buf;
}

Fingerprint parse_hex(const std::string& s) { return std::stoull(s, nullptr, 16); }

ojson terms_json(const std::vector<NamedTerm>& terms) {
  ojson a = ojson::array();
  for (const auto& t : terms) a.push_back({{"name", t.name}, {"value", t.value}});
  return a;
}

std::vector<NamedTerm> terms_from(const nlohmann::json& j) {
  std::vector<NamedTerm> out;
  for (const auto& t : j) out.push_back({t.at("name").get<std::string>(), t.at("value").get<double>()});
  return out;
}

ojson row_json(const ReportRow& row, double tolerance) {
  const RelationReport& r = row.report;
  ojson j;
  j["dim"] = row.dim;
  j["trial"] = row.trial;
  j["sub_seed"] = row.sub_seed;
  j["relation"] = std::string(to_string(r.relation));
  j["lhs"] = r.lhs;
  j["rhs_terms"] = terms_json(r.rhs_terms);
  j["rhs_total"] = r.rhs_total;
  j["slack"] = r.slack;
  j["sign"] = r.sign ? ojson(std::string(to_string(*r.sign))) : ojson(nullptr);
  j["psibar_mode"] = std::string(to_string(r.psibar_mode));
  j["tight"] = r.tight;
  j["verified"] = r.verified(tolerance);
  j["imag_residue"] = r.imag_residue;
  ojson fps = ojson::array();
  for (const auto& f : r.fingerprints) fps.push_back({{"name", f.name}, {"value", hex(f.value)}});
  j["fingerprints"] = std::move(fps);
  j["diagnostics"] = terms_json(r.diagnostics);
  j["notes"] = r.notes;
  return j;
}

ReportRow row_from(const nlohmann::json& j) {
  ReportRow row;
  row.dim = j.at("dim").get<int>();
  row.trial = j.at("trial").get<int>();
  row.sub_seed = j.at("sub_seed").get<std::uint64_t>();
  RelationReport& r = row.report;
  r.relation = relation_from_string(j.at("relation").get<std::string>());
  r.lhs = j.at("lhs").get<double>();
  r.rhs_terms = terms_from(j.at("rhs_terms"));
  r.rhs_total = j.at("rhs_total").get<double>();
  r.slack = j.at("slack").get<double>();
  if (!j.at("sign").is_null()) r.sign = sign_from_string(j.at("sign").get<std::string>());
  r.psibar_mode = psibar_mode_from_string(j.at("psibar_mode").get<std::string>());
  r.tight = j.at("tight").get<bool>();
  r.imag_residue = j.at("imag_residue").get<double>();
  for (const auto& f : j.at("fingerprints"))
    r.fingerprints.push_back({f.at("name").get<std::string>(), parse_hex(f.at("value").get<std::string>())});
  r.diagnostics = terms_from(j.at("diagnostics"));
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return row;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string joined_terms(const std::vector<NamedTerm>& terms) {
  std::string s;
  for (const auto& t : terms) {
    if (!s.empty()) s += ';';
    s += t.name + '=' + format_double(t.value);
  }
  return s;
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& j, int indent) {
  std::string out;
  dump_value(j, indent, 0, out);
  return out;
}

std::string render_json(const ReportSet& set) {
  ojson root;
  root["schema"] = "weakmeas-report/1";
  root["library_version"] = set.library_version;
  root["timestamp"] = set.timestamp;
  root["wall_clock_seconds"] = set.wall_clock_seconds;
  root["tolerance"] = set.tolerance;
  root["config"] = set.config;
  const Aggregates& a = set.aggregates;
  root["aggregates"] = {{"report_count", a.report_count},     {"check_count", a.check_count},
                        {"failure_count", a.failure_count},   {"min_slack", a.min_slack},
                        {"max_imag_residue", a.max_imag_residue}, {"tightness_rate", a.tightness_rate},
                        {"rejections", a.rejections}};
  ojson checks = ojson::array();
  for (const auto& c : set.checks)
    checks.push_back({{"name", c.name},
                      {"observed", c.observed},
                      {"expected", c.expected},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed}});
  root["checks"] = std::move(checks);
  ojson rows = ojson::array();
  for (const auto& r : set.rows) rows.push_back(row_json(r, set.tolerance));
  root["reports"] = std::move(rows);
  return dump_json(root) + "\n";
}

ReportSet parse_report_json(const std::string& text) {
  try {
    const ojson root = ojson::parse(text);
    ReportSet set;
    set.library_version = root.at("library_version").get<std::string>();
    set.timestamp = root.at("timestamp").get<std::string>();
    set.wall_clock_seconds = root.at("wall_clock_seconds").get<double>();
    set.tolerance = root.at("tolerance").get<double>();
    set.config = root.at("config");
    const auto& a = root.at("aggregates");
    set.aggregates.report_count = a.at("report_count").get<std::size_t>();
    set.aggregates.check_count = a.at("check_count").get<std::size_t>();
    set.aggregates.failure_count = a.at("failure_count").get<std::size_t>();
    set.aggregates.min_slack = a.at("min_slack").get<double>();
    set.aggregates.max_imag_residue = a.at("max_imag_residue").get<double>();
    set.aggregates.tightness_rate = a.at("tightness_rate").get<double>();
    set.aggregates.rejections = a.at("rejections").get<std::size_t>();
    for (const auto& c : root.at("checks"))
      set.checks.push_back({c.at("name").get<std::string>(), c.at("observed").get<double>(),
                            c.at("expected").get<double>(), c.at("tolerance").get<double>(),
                            c.at("passed").get<bool>()});
    for (const auto& r : root.at("reports")) set.rows.push_back(row_from(r));
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::io, std::string("malformed report: ") + e.what());
  }
}

std::string render_csv(const ReportSet& set) {
  std::ostringstream os;
  os << "kind,dim,trial,sub_seed,relation,psibar_mode,sign,lhs,rhs_total,slack,tight,verified,imag_residue,"
        "rhs_terms,diagnostics,fingerprints,notes\n";
  for (const auto& row : set.rows) {
    const RelationReport& r = row.report;
    std::string fps;
    for (const auto& f : r.fingerprints) {
      if (!fps.empty()) fps += ';';
      fps += f.name + '=' + hex(f.value);
    }
    std::string notes;
    for (const auto& n : r.notes) {
      if (!notes.empty()) notes += "; ";
      notes += n;
    }
    os << "relation," << row.dim << ',' << row.trial << ',' << row.sub_seed << ',' << to_string(r.relation) << ','
       << to_string(r.psibar_mode) << ',' << (r.sign ? std::string(to_string(*r.sign)) : std::string()) << ','
       << format_double(r.lhs) << ',' << format_double(r.rhs_total) << ',' << format_double(r.slack) << ','
       << (r.tight ? "true" : "false") << ',' << (r.verified(set.tolerance) ? "true" : "false") << ','
       << format_double(r.imag_residue) << ',' << csv_escape(joined_terms(r.rhs_terms)) << ','
       << csv_escape(joined_terms(r.diagnostics)) << ',' << csv_escape(fps) << ',' << csv_escape(notes) << '\n';
  }
  // Fixture checks: observed in lhs, expected in rhs_total, tolerance in slack.
  for (const auto& c : set.checks) {
    os << "check,,,," << csv_escape(c.name) << ",,," << format_double(c.observed) << ','
       << format_double(c.expected) << ',' << format_double(c.tolerance) << ",," << (c.passed ? "true" : "false")
       << ",,,,,\n";
  }
  return os.str();
}

void emit_report(const ReportSet& set, ReportFormat format, const std::string& path) {
  const std::string text = format == ReportFormat::json ? render_json(set) : render_csv(set);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw Error(ErrorKind::io, "write to '" + path + "' failed");
}

}  // namespace wm
