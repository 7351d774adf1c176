#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "raltsim/cert.hpp"

namespace raltsim {
namespace cert {

enum class DocumentFormat { json, text };

namespace detail {

using nlohmann::json;

inline json to_json(const Classification& c) {
  return json{{"level", to_string(c.level)},
              {"triggered_predicates", c.triggered_predicates}};
}

inline json to_json(const PartNumberChange& pn) {
  return json{{"old", pn.old_pn}, {"new", pn.new_pn}};
}

inline json to_json(const ProblemReport& opr) {
  return json{{"id", opr.id}, {"disposition", opr.disposition}};
}

inline json to_json(const MOCRow& row) {
  std::vector<std::string> mocs;
  for (MOC m : row.mocs) mocs.emplace_back(to_string(m));
  return json{{"standard", row.standard},
              {"requirement_source", row.requirement_source},
              {"moc", mocs},
              {"evidence_refs", row.evidence_refs}};
}

inline json to_json(const MOCMatrix& matrix) {
  json rows = json::array();
  for (const MOCRow& row : matrix.rows) rows.push_back(to_json(row));
  return json{{"rows", rows}};
}

inline ChangeLevel level_from_string(const std::string& s) {
  if (s == "major") return ChangeLevel::major;
  if (s == "minor") return ChangeLevel::minor;
  throw std::invalid_argument("unknown change level '" + s + "'");
}

inline MOC moc_from_string(const std::string& s) {
  if (s == "test_lab") return MOC::test_lab;
  if (s == "test_flight") return MOC::test_flight;
  if (s == "analysis") return MOC::analysis;
  throw std::invalid_argument("unknown MOC '" + s + "'");
}

inline MOCRow moc_row_from_json(const json& j) {
  MOCRow row;
  row.standard = j.at("standard").get<std::string>();
  row.requirement_source = j.at("requirement_source").get<std::string>();
  for (const auto& m : j.at("moc")) row.mocs.push_back(moc_from_string(m));
  if (j.contains("evidence_refs")) {
    row.evidence_refs = j.at("evidence_refs").get<std::vector<std::string>>();
  }
  return row;
}

}  // namespace detail

inline std::string emit_moc_matrix(const MOCMatrix& matrix) {
  return detail::to_json(matrix).dump(2) + "\n";
}

inline MOCMatrix parse_moc_matrix(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<MOCRow> rows;
  for (const auto& row : j.at("rows")) rows.push_back(detail::moc_row_from_json(row));
  return build_moc_matrix(rows);
}

/// Canonical serialization: keys sorted, two-space indent, trailing newline.
/// Identical documents emit identical bytes.
inline std::string emit_document(const CIADocument& doc, DocumentFormat format) {
  const std::vector<std::string> problems = validate_cia(doc);
  if (!problems.empty()) {
    std::string msg = "emit_document: refusing to emit an invalid document:";
    for (const std::string& p : problems) msg += "\n  - " + p;
    throw std::invalid_argument(msg);
  }

  using nlohmann::json;
  if (format == DocumentFormat::json) {
    json pns = json::array();
    for (const auto& pn : doc.affected_part_numbers) pns.push_back(detail::to_json(pn));
    json oprs = json::array();
    for (const auto& opr : doc.open_problem_reports) oprs.push_back(detail::to_json(opr));
    const json j{{"declaration", detail::to_json(doc.declaration)},
                 {"schedule_note", doc.schedule_note},
                 {"affected_part_numbers", pns},
                 {"modification_description", doc.modification_description},
                 {"affected_regulations", doc.affected_regulations},
                 {"moc_matrix", detail::to_json(doc.moc_matrix)},
                 {"verification_evidence", doc.verification_evidence},
                 {"return_to_service_note", doc.return_to_service_note},
                 {"open_problem_reports", oprs}};
    return j.dump(2) + "\n";
  }

  // Text rendering, fixed section order.
  std::string out;
  auto section = [&out](const std::string& title) {
    out += "## " + title + "\n";
  };

  out += "# Change Impact Analysis\n\n";

  section("Declaration of the Change");
  out += "Classification: ";
  out += to_string(doc.declaration.level);
  out += "\n";
  if (doc.declaration.triggered_predicates.empty()) {
    out += "No classification triggers are set.\n";
  } else {
    out += "Triggered predicates:\n";
    for (const auto& p : doc.declaration.triggered_predicates) out += "  - " + p + "\n";
  }
  out += "\n";

  section("Project Schedule");
  out += doc.schedule_note + "\n\n";

  section("Affected Part Number");
  if (doc.affected_part_numbers.empty()) {
    out += "No part number evolution.\n";
  } else {
    for (const auto& pn : doc.affected_part_numbers) {
      out += "  " + pn.old_pn + " -> " + pn.new_pn + "\n";
    }
  }
  if (!doc.open_problem_reports.empty()) {
    out += "Open problem reports reviewed with this change:\n";
    for (const auto& opr : doc.open_problem_reports) {
      out += "  " + opr.id + ": " + opr.disposition + "\n";
    }
  }
  out += "\n";

  section("Modification Description");
  out += doc.modification_description + "\n\n";

  section("Affected Regulations");
  for (const auto& reg : doc.affected_regulations) out += "  - " + reg + "\n";
  out += "\n";

  section("Compliance Strategy and MOC");
  for (const auto& row : doc.moc_matrix.rows) {
    out += "  " + row.standard + " | " + row.requirement_source + " | ";
    for (std::size_t i = 0; i < row.mocs.size(); ++i) {
      if (i > 0) out += ", ";
      out += to_string(row.mocs[i]);
    }
    out += "\n";
  }
  out += "\n";

  section("Verification Methods");
  bool any_test = false;
  bool any_analysis = false;
  for (const auto& row : doc.moc_matrix.rows) {
    for (MOC m : row.mocs) {
      any_test = any_test || is_test_moc(m);
      any_analysis = any_analysis || m == MOC::analysis;
    }
  }
  if (any_test) {
    out += "Test evidence (report fingerprints):\n";
    for (const auto& fp : doc.verification_evidence) out += "  - " + fp + "\n";
  }
  if (any_analysis) {
    out += "Analysis evidence: design documentation and vendor specifications.\n";
  }
  out += "\n";

  section("Return to Service");
  out += doc.return_to_service_note + "\n";
  return out;
}

/// Inverse of the JSON rendering; round-trips losslessly.
inline CIADocument parse_cia(const std::string& text) {
  using nlohmann::json;
  const json j = json::parse(text);
  CIADocument doc;
  doc.declaration.level =
      detail::level_from_string(j.at("declaration").at("level").get<std::string>());
  doc.declaration.triggered_predicates =
      j.at("declaration").at("triggered_predicates").get<std::vector<std::string>>();
  for (const auto& pn : j.at("affected_part_numbers")) {
    doc.affected_part_numbers.push_back(
        {pn.at("old").get<std::string>(), pn.at("new").get<std::string>()});
  }
  doc.schedule_note = j.at("schedule_note").get<std::string>();
  doc.modification_description = j.at("modification_description").get<std::string>();
  doc.affected_regulations = j.at("affected_regulations").get<std::vector<std::string>>();
  for (const auto& row : j.at("moc_matrix").at("rows")) {
    doc.moc_matrix.rows.push_back(detail::moc_row_from_json(row));
  }
  doc.verification_evidence = j.at("verification_evidence").get<std::vector<std::string>>();
  doc.return_to_service_note = j.at("return_to_service_note").get<std::string>();
  for (const auto& opr : j.at("open_problem_reports")) {
    doc.open_problem_reports.push_back(
        {opr.at("id").get<std::string>(), opr.at("disposition").get<std::string>()});
  }
  return doc;
}

}  // namespace cert
}  // namespace raltsim
