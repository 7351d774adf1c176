#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace raltsim {
namespace cert {

struct PartNumberChange {
  std::string old_pn;
  std::string new_pn;

  bool operator==(const PartNumberChange&) const = default;
};

struct ProblemReport {
  std::string id;
  std::string disposition;

  bool operator==(const ProblemReport&) const = default;
};

/// Facts about a proposed equipment change that drive its regulatory
/// classification and the impact-analysis document.
struct ChangeDescriptor {
  bool affects_form = false;
  bool affects_fit = false;
  bool affects_intended_function = false;
  bool requires_operator_training = false;
  bool requires_full_mops_retest = false;
  bool hardware_change = false;
  std::string description;
  std::vector<PartNumberChange> affected_part_numbers;
  std::vector<ProblemReport> open_problem_reports;

  void validate() const {
    if (hardware_change && affected_part_numbers.empty()) {
      throw std::invalid_argument(
          "ChangeDescriptor: a hardware change must evolve at least one part number");
    }
  }

  bool operator==(const ChangeDescriptor&) const = default;
};

enum class ChangeLevel { minor, major };

inline const char* to_string(ChangeLevel level) {
  return level == ChangeLevel::major ? "major" : "minor";
}

struct Classification {
  ChangeLevel level = ChangeLevel::minor;
  std::vector<std::string> triggered_predicates;

  bool operator==(const Classification&) const = default;
};

/// Major/minor decision as a pure predicate disjunction: the change is major
/// exactly when any trigger is set. The predicate list is fixed to the five
/// descriptor flags; the returned classification names the ones that fired.
inline Classification classify_change(const ChangeDescriptor& change) {
  Classification result;
  const std::pair<bool, const char*> predicates[] = {
      {change.affects_form, "affects_form"},
      {change.affects_fit, "affects_fit"},
      {change.affects_intended_function, "affects_intended_function"},
      {change.requires_operator_training, "requires_operator_training"},
      {change.requires_full_mops_retest, "requires_full_mops_retest"},
  };
  for (const auto& [set, name] : predicates) {
    if (set) result.triggered_predicates.emplace_back(name);
  }
  result.level =
      result.triggered_predicates.empty() ? ChangeLevel::minor : ChangeLevel::major;
  return result;
}

enum class MOC { test_lab, test_flight, analysis };

inline const char* to_string(MOC moc) {
  switch (moc) {
    case MOC::test_lab: return "test_lab";
    case MOC::test_flight: return "test_flight";
    default: return "analysis";
  }
}

inline bool is_test_moc(MOC moc) {
  return moc == MOC::test_lab || moc == MOC::test_flight;
}

struct MOCRow {
  std::string standard;            // e.g. "TSO-C87"
  std::string requirement_source;  // e.g. "AMOC"
  std::vector<MOC> mocs;
  std::vector<std::string> evidence_refs;  // report fingerprints

  bool needs_evidence() const {
    return std::any_of(mocs.begin(), mocs.end(), is_test_moc);
  }

  bool operator==(const MOCRow&) const = default;
};

struct MOCMatrix {
  std::vector<MOCRow> rows;

  bool operator==(const MOCMatrix&) const = default;
};

/// Validates rows and merges duplicate standard identifiers (MOC-set union,
/// evidence union), preserving first-seen order. A row with no MOC at all is
/// rejected: every requirement must be shown compliant somehow.
inline MOCMatrix build_moc_matrix(const std::vector<MOCRow>& entries) {
  MOCMatrix matrix;
  for (const MOCRow& entry : entries) {
    if (entry.standard.empty()) {
      throw std::invalid_argument("build_moc_matrix: row with empty standard identifier");
    }
    if (entry.mocs.empty()) {
      throw std::invalid_argument("build_moc_matrix: row '" + entry.standard +
                                  "' lists no means of compliance");
    }
    MOCRow* existing = nullptr;
    for (MOCRow& row : matrix.rows) {
      if (row.standard == entry.standard) {
        existing = &row;
        break;
      }
    }
    if (existing == nullptr) {
      MOCRow row = entry;
      std::sort(row.mocs.begin(), row.mocs.end());
      row.mocs.erase(std::unique(row.mocs.begin(), row.mocs.end()), row.mocs.end());
      matrix.rows.push_back(std::move(row));
      continue;
    }
    for (MOC moc : entry.mocs) {
      if (std::find(existing->mocs.begin(), existing->mocs.end(), moc) ==
          existing->mocs.end()) {
        existing->mocs.push_back(moc);
      }
    }
    std::sort(existing->mocs.begin(), existing->mocs.end());
    for (const std::string& ref : entry.evidence_refs) {
      if (std::find(existing->evidence_refs.begin(), existing->evidence_refs.end(),
                    ref) == existing->evidence_refs.end()) {
        existing->evidence_refs.push_back(ref);
      }
    }
  }
  return matrix;
}

/// Shipped compliance matrix for the filter change: the performance standard
/// via alternative means (lab evidence plus analysis) and the in-house
/// product specification via lab evidence.
inline MOCMatrix default_moc_matrix() {
  return build_moc_matrix({
      {"TSO-C87", "AMOC", {MOC::test_lab, MOC::analysis}, {}},
      {"Non-Regulatory", "Product Specification", {MOC::test_lab}, {}},
  });
}

/// Change Impact Analysis document. Section layout mirrors the standard
/// impact-analysis structure; see emit_document for the text rendering.
struct CIADocument {
  Classification declaration;
  std::string schedule_note;
  std::vector<PartNumberChange> affected_part_numbers;
  std::string modification_description;
  std::vector<std::string> affected_regulations;
  MOCMatrix moc_matrix;
  std::vector<std::string> verification_evidence;  // fingerprint pool
  std::string return_to_service_note;
  std::vector<ProblemReport> open_problem_reports;

  bool operator==(const CIADocument&) const = default;
};

/// Optional free-text inputs for document assembly.
struct CIANotes {
  std::string schedule_note =
      "Schedule driven by component lead time, laboratory availability, and "
      "approval processing time.";
  std::string return_to_service_note =
      "Modified units re-enter service via Service Bulletin; legacy units are "
      "removed and modified units installed and checked out per the bulletin.";
  std::vector<std::string> affected_regulations;  // defaults to matrix standards
};

/// Validation problems, one line per offending row/reference; empty = valid.
inline std::vector<std::string> validate_cia(const CIADocument& doc) {
  std::vector<std::string> problems;
  if ((doc.declaration.level == ChangeLevel::major) !=
      !doc.declaration.triggered_predicates.empty()) {
    problems.emplace_back("declaration level is inconsistent with its trigger list");
  }
  for (const MOCRow& row : doc.moc_matrix.rows) {
    if (row.mocs.empty()) {
      problems.push_back("MOC row '" + row.standard + "' lists no means of compliance");
      continue;
    }
    if (row.needs_evidence() && row.evidence_refs.empty()) {
      problems.push_back("MOC row '" + row.standard +
                         "' uses test evidence but references none");
    }
    for (const std::string& ref : row.evidence_refs) {
      if (std::find(doc.verification_evidence.begin(), doc.verification_evidence.end(),
                    ref) == doc.verification_evidence.end()) {
        problems.push_back("MOC row '" + row.standard + "' references unknown evidence '" +
                           ref + "'");
      }
    }
  }
  return problems;
}

/// Assembles and validates a CIA document. Test-MOC rows that arrive without
/// evidence references are linked to the supplied fingerprint pool. The
/// classification is cross-checked against the descriptor; a mismatch is a
/// hard error rather than a document to fix up later.
inline CIADocument build_cia(const ChangeDescriptor& change,
                             const Classification& classification,
                             const MOCMatrix& matrix,
                             const std::vector<std::string>& evidence_fingerprints,
                             const CIANotes& notes = {}) {
  change.validate();
  if (!(classify_change(change) == classification)) {
    throw std::invalid_argument(
        "build_cia: classification does not match the change descriptor");
  }

  CIADocument doc;
  doc.declaration = classification;
  doc.schedule_note = notes.schedule_note;
  doc.affected_part_numbers = change.affected_part_numbers;
  doc.modification_description = change.description;
  doc.moc_matrix = matrix;
  doc.verification_evidence = evidence_fingerprints;
  doc.return_to_service_note = notes.return_to_service_note;
  doc.open_problem_reports = change.open_problem_reports;

  if (notes.affected_regulations.empty()) {
    for (const MOCRow& row : matrix.rows) {
      doc.affected_regulations.push_back(row.standard);
    }
  } else {
    doc.affected_regulations = notes.affected_regulations;
  }

  for (MOCRow& row : doc.moc_matrix.rows) {
    if (row.needs_evidence() && row.evidence_refs.empty()) {
      row.evidence_refs = evidence_fingerprints;
    }
  }

  const std::vector<std::string> problems = validate_cia(doc);
  if (!problems.empty()) {
    std::string msg = "build_cia: document failed validation:";
    for (const std::string& p : problems) msg += "\n  - " + p;
    throw std::invalid_argument(msg);
  }
  return doc;
}

}  // namespace cert
}  // namespace raltsim
