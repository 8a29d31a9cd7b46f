#include "ktbrst/runner.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ktbrst {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skipped: return "skipped";
    case Verdict::Error: return "error";
  }
  return "error";
}

bool CheckReport::all_passed() const {
  for (const CheckRecord& r : records)
    if (r.verdict == Verdict::Fail || r.verdict == Verdict::Error) return false;
  return true;
}

bool CheckSelection::selected(const std::string& id) const {
  if (none) return false;
  if (only.empty()) return true;
  for (const std::string& want : only) {
    if (id == want) return true;
    if (id.size() > want.size() && id.compare(0, want.size(), want) == 0 &&
        id[want.size()] == '/')
      return true;
  }
  return false;
}

namespace {

CheckRecord from_outcome(std::string id, const CheckOutcome& outcome) {
  CheckRecord r;
  r.id = std::move(id);
  r.verdict = outcome.pass ? Verdict::Pass : Verdict::Fail;
  r.note = outcome.note;
  r.witnesses = outcome.witnesses;
  return r;
}

// One job may produce several records (the equivalence suite shares one
// evaluation across its four verdicts).
using CheckFn = std::function<std::vector<CheckRecord>()>;

std::vector<CheckRecord> timed(const std::string& id, const CheckFn& fn) {
  auto start = std::chrono::steady_clock::now();
  std::vector<CheckRecord> rs;
  try {
    rs = fn();
  } catch (const std::exception& e) {
    CheckRecord r;
    r.id = id;
    r.verdict = Verdict::Error;
    r.note = e.what();
    rs = {r};
  }
  double each = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() /
                static_cast<double>(rs.empty() ? 1 : rs.size());
  for (CheckRecord& r : rs) r.seconds = each;
  return rs;
}

bool model_has_complete_duals(const Model& m) {
  for (int i = 0; i < m.space->size(); ++i)
    if (!is_antifield_role(m.space->decl(i).role) && !m.space->dual(i)) return false;
  return true;
}

}  // namespace

CheckReport run_checks(const Model& m, const CheckSelection& selection, int jobs) {
  validate_model(m);
  CheckReport report;
  report.model_name = m.name;
  report.model_notes = m.notes;

  const bool zero_lagrangian = m.lagrangian.is_zero();
  const bool duals = model_has_complete_duals(m);

  std::vector<std::pair<std::string, CheckFn>> plan;
  auto add = [&](std::string id, std::function<CheckRecord()> fn) {
    if (selection.selected(id))
      plan.emplace_back(id, [fn = std::move(fn)] { return std::vector<CheckRecord>{fn()}; });
  };

  add("euler-lagrange", [&m] {
    CheckRecord r;
    r.id = "euler-lagrange";
    r.verdict = Verdict::Pass;
    r.note = "informational dump of the variational derivatives";
    EulerLagrange el = euler_lagrange(m.lagrangian);
    for (const auto& [field, comp] : el.components)
      r.witnesses.emplace_back(m.space->decl(field).name, render_witness(comp, 16));
    return r;
  });

  for (const NoetherStage& st : m.stages) {
    for (const NoetherGenerator& gen : st.generators) {
      if (st.stage == 0) {
        std::string id = "noether-identity/" + gen.ghost;
        add(id, [&m, &gen, id, zero_lagrangian] {
          CheckRecord r;
          if (zero_lagrangian) {
            r.id = id;
            r.verdict = Verdict::Skipped;
            r.note = "not evaluated: the Lagrangian is zero";
            return r;
          }
          return from_outcome(id, check_noether_identity(m, gen));
        });
      }
    }
    if (st.stage >= 1) {
      std::string id = "stage-identity/" + std::to_string(st.stage);
      int k = st.stage;
      add(id, [&m, id, k] { return from_outcome(id, check_stage_identity(m, k)); });
    }
  }

  add("kt-nilpotency", [&m, duals] {
    CheckRecord r;
    r.id = "kt-nilpotency";
    if (!duals) {
      r.verdict = Verdict::Skipped;
      r.note = "model declares no complete antifield basis";
      return r;
    }
    NilpotencyCheck nil = is_nilpotent(build_kt_operator(m));
    r.verdict = nil.ok ? Verdict::Pass : Verdict::Fail;
    r.note = nil.reason;
    for (const auto& [field, res] : nil.residuals)
      r.witnesses.emplace_back(m.space->decl(field).name, render_witness(res));
    return r;
  });

  add("gauge-construction", [&m] {
    CheckRecord r;
    r.id = "gauge-construction";
    Derivation u = build_gauge_operator(m);
    r.verdict = Verdict::Pass;
    r.note = "gauge operator assembled from the generator adjoints";
    for (const auto& [field, comp] : u.components())
      r.witnesses.emplace_back(m.space->decl(field).name, render_witness(comp, 16));
    return r;
  });

  for (const NoetherStage& st : m.stages) {
    std::string id = "gauge-symmetry/" + std::to_string(st.stage);
    int k = st.stage;
    add(id, [&m, id, k, zero_lagrangian] {
      if (k == 0 && zero_lagrangian) {
        CheckRecord r;
        r.id = id;
        r.verdict = Verdict::Skipped;
        r.note = "not evaluated: the Lagrangian is zero";
        return r;
      }
      Derivation u = build_gauge_operator(m);
      std::vector<CheckOutcome> all = check_gauge_symmetry_conditions(m, u);
      return from_outcome(id, all.at(static_cast<size_t>(k)));
    });
  }

  add("extended-lagrangian", [&m] {
    CheckRecord r;
    r.id = "extended-lagrangian";
    Density le = build_extended_lagrangian(m);
    r.verdict = Verdict::Pass;
    r.note = "total ghost grading zero";
    r.witnesses.emplace_back("L_e", render_witness(le.coeff, 16));
    return r;
  });

  add("brst-nilpotency", [&m] {
    CheckRecord r;
    r.id = "brst-nilpotency";
    NilpotencyCheck nil = is_nilpotent(build_brst_operator(m));
    r.verdict = nil.ok ? Verdict::Pass : Verdict::Fail;
    r.note = nil.reason;
    for (const auto& [field, res] : nil.residuals)
      r.witnesses.emplace_back(m.space->decl(field).name, render_witness(res));
    return r;
  });

  add("master-equation", [&m, duals] {
    CheckRecord r;
    r.id = "master-equation";
    if (!duals) {
      r.verdict = Verdict::Skipped;
      r.note = "model declares no complete antifield basis";
      return r;
    }
    return from_outcome("master-equation", check_master_equation(m, build_proper_solution(m)));
  });

  if (duals) {
    bool any_equivalence = false;
    for (const char* id :
         {"equivalence/master-equation", "equivalence/upsilon", "equivalence/upsilon-bar", "equivalence/theta-nilpotent"})
      any_equivalence |= selection.selected(id);
    if (any_equivalence)
      plan.emplace_back("equivalence", [&m, &selection] {
        MasterEquivalenceSuite suite = build_master_equivalence_suite(m, build_proper_solution(m));
        std::vector<CheckRecord> rs;
        auto push = [&](const char* id, const CheckOutcome& o) {
          if (selection.selected(id)) rs.push_back(from_outcome(id, o));
        };
        push("equivalence/master-equation", suite.master);
        push("equivalence/upsilon", suite.upsilon_symmetry);
        push("equivalence/upsilon-bar", suite.upsilon_bar_symmetry);
        push("equivalence/theta-nilpotent", suite.theta_nilpotent);
        return rs;
      });
  }

  if (jobs < 1) jobs = 1;
  auto append = [&report](std::vector<CheckRecord> rs) {
    for (CheckRecord& r : rs) report.records.push_back(std::move(r));
  };
  if (jobs == 1) {
    for (const auto& [id, fn] : plan) append(timed(id, fn));
  } else {
    std::vector<std::future<std::vector<CheckRecord>>> futures;
    size_t next = 0;
    while (next < plan.size() || !futures.empty()) {
      while (next < plan.size() && static_cast<int>(futures.size()) < jobs) {
        const auto& [id, fn] = plan[next++];
        futures.push_back(std::async(std::launch::async, [id, fn] { return timed(id, fn); }));
      }
      append(futures.front().get());
      futures.erase(futures.begin());
    }
  }

  std::sort(report.records.begin(), report.records.end(),
            [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
  return report;
}

namespace {

const char* kTimingMarker = "# timing";

}  // namespace

std::string emit_report(const CheckReport& report, ReportFormat format) {
  if (format == ReportFormat::Text) {
    std::ostringstream os;
    os << "ktbrst-report v" << kReportFormatVersion << '\n';
    os << "model: " << report.model_name << '\n';
    os << "engine: " << report.engine_version << '\n';
    for (const std::string& note : report.model_notes) os << "note: " << note << '\n';
    int passed = 0, failed = 0, skipped = 0, errors = 0;
    for (const CheckRecord& r : report.records) {
      os << "check: " << r.id << '\n';
      os << "  verdict: " << to_string(r.verdict) << '\n';
      if (!r.note.empty()) os << "  note: " << r.note << '\n';
      for (const auto& [label, value] : r.witnesses)
        os << "  witness " << label << ": " << value << '\n';
      switch (r.verdict) {
        case Verdict::Pass: ++passed; break;
        case Verdict::Fail: ++failed; break;
        case Verdict::Skipped: ++skipped; break;
        case Verdict::Error: ++errors; break;
      }
    }
    os << "summary: " << passed << " passed, " << failed << " failed, " << skipped
       << " skipped, " << errors << " errors\n";
    os << kTimingMarker << '\n';
    for (const CheckRecord& r : report.records) {
      std::ostringstream t;
      t.setf(std::ios::fixed);
      t.precision(3);
      t << r.seconds;
      os << "  " << r.id << ": " << t.str() << "s\n";
    }
    return os.str();
  }

  nlohmann::ordered_json doc;
  doc["format"] = "ktbrst-report";
  doc["version"] = kReportFormatVersion;
  doc["engine"] = report.engine_version;
  doc["model"] = report.model_name;
  doc["notes"] = report.model_notes;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  int passed = 0, failed = 0, skipped = 0, errors = 0;
  for (const CheckRecord& r : report.records) {
    nlohmann::ordered_json c;
    c["id"] = r.id;
    c["verdict"] = to_string(r.verdict);
    c["note"] = r.note;
    nlohmann::ordered_json ws = nlohmann::ordered_json::array();
    for (const auto& [label, value] : r.witnesses) {
      nlohmann::ordered_json w;
      w["label"] = label;
      w["value"] = value;
      ws.push_back(std::move(w));
    }
    c["witnesses"] = std::move(ws);
    checks.push_back(std::move(c));
    switch (r.verdict) {
      case Verdict::Pass: ++passed; break;
      case Verdict::Fail: ++failed; break;
      case Verdict::Skipped: ++skipped; break;
      case Verdict::Error: ++errors; break;
    }
  }
  doc["checks"] = std::move(checks);
  doc["summary"] = {{"passed", passed}, {"failed", failed}, {"skipped", skipped},
                    {"errors", errors}};
  nlohmann::ordered_json timing;
  for (const CheckRecord& r : report.records) timing[r.id] = r.seconds;
  doc["timing"] = std::move(timing);
  return doc.dump(2) + "\n";
}

std::string comparable_section(const std::string& emitted, ReportFormat format) {
  if (format == ReportFormat::Text) {
    size_t at = emitted.find(kTimingMarker);
    return at == std::string::npos ? emitted : emitted.substr(0, at);
  }
  nlohmann::ordered_json doc = nlohmann::ordered_json::parse(emitted);
  doc.erase("timing");
  return doc.dump(2) + "\n";
}

}  // namespace ktbrst
