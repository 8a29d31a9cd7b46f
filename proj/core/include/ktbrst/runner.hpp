#pragma once

#include <string>
#include <vector>

#include "ktbrst/brst.hpp"

namespace ktbrst {

inline constexpr const char* kEngineVersion = "0.1.0";
inline constexpr int kReportFormatVersion = 1;

enum class Verdict { Pass, Fail, Skipped, Error };
const char* to_string(Verdict v);

struct CheckRecord {
  std::string id;
  Verdict verdict = Verdict::Error;
  std::string note;
  std::vector<std::pair<std::string, std::string>> witnesses;
  double seconds = 0.0;  // excluded from the comparable report section
};

struct CheckReport {
  std::string model_name;
  std::string engine_version = kEngineVersion;
  std::vector<std::string> model_notes;
  std::vector<CheckRecord> records;  // sorted by id

  bool all_passed() const;
};

// Check selection by identifier: exact match or prefix up to a '/'. The
// default selects everything; an explicitly empty selection selects nothing.
struct CheckSelection {
  std::vector<std::string> only;
  bool none = false;

  static CheckSelection empty() {
    CheckSelection s;
    s.none = true;
    return s;
  }
  bool selected(const std::string& id) const;
};

// Runs the selected verification suite over a model. Independent checks may
// run concurrently (jobs > 1); records are assembled in identifier order
// either way. Configuration errors become Error records, not exceptions.
CheckReport run_checks(const Model& m, const CheckSelection& selection = {}, int jobs = 1);

enum class ReportFormat { Text, Structured };

// Deterministic rendering. Timing lives in a trailing section (text) or a
// separate top-level key (structured) so the comparable part is a pure
// function of model, selection and engine version.
std::string emit_report(const CheckReport& report, ReportFormat format);

// The comparable part only, used by determinism tests.
std::string comparable_section(const std::string& emitted, ReportFormat format);

}  // namespace ktbrst
