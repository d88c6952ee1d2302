// One PASS/FAIL line per acceptance criterion; exits 1 if any fail.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ndp/checker.hpp"
#include "ndp/cli.hpp"
#include "ndp/export.hpp"
#include "ndp/persist.hpp"
#include "ndp/script.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"
#include "support/paper.hpp"

using namespace ndp;
namespace fs = std::filesystem;

namespace {

struct Failure {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string data(const std::string& name) { return std::string(NDP_SOURCE_DIR) + "/tests/data/" + name; }

fs::path scratch() {
  fs::path p = fs::temp_directory_path() / ("ndp-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void paper_proof() {
  auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  int code = cmd_prove(paper::script_path(), std::nullopt, out, err);
  double took = seconds_since(t0);
  require(code == kExitOk, "cmd_prove exit " + std::to_string(code) + ": " + err.str());
  require(out.str() == slurp(paper::golden("paper.txt")), "render differs from the golden figure");
  ScriptOutcome r = run_script(parse_script(slurp(paper::script_path())));
  std::vector<std::string> expected = {"Prem", "Ass", "Ass", "3,∧E", "5,9,¬E", "Ass",
                                       "3,∧E", "7,10,¬E", "1,5-6,7-8,∨E", "3-4,¬I"};
  std::vector<int> order = {1, 3, 5, 9, 6, 7, 10, 8, 4, 2};
  RenderedProof rp = render(r.state);
  require(rp.rows.size() == order.size(), "expected 10 rows");
  for (std::size_t i = 0; i < order.size(); ++i) {
    require(rp.rows[i].creation == order[i], "row " + std::to_string(i + 1) + " has the wrong creation number");
    require(rp.rows[i].justification() == expected[i], "row " + std::to_string(i + 1) + " justification " +
                                                           rp.rows[i].justification());
  }
  require(took < 1.0, "took " + std::to_string(took) + " s");
}

void palette_demo() {
  auto t0 = std::chrono::steady_clock::now();
  ProofState s = new_proof({}, parse_formula("p ∨ ¬p"), make_system(SystemName::NK));
  s.palette = make_system(SystemName::NJ).enabled;
  s = select_goal(s, 1);
  std::set<std::string> offered;
  for (const auto& a : list_applicable(s)) offered.insert(a.label());
  require(offered == std::set<std::string>{"∨I(left)", "∨I(right)"}, "NJ palette offers other rules on p ∨ ¬p");

  RuleArgs left;
  left.side = Side::Left;
  ProofState l = apply_rule(s, Rule::OrI, left);
  require(list_applicable(select_goal(l, 2)).empty(), "goal p still has applicable rules");

  RuleArgs right;
  right.side = Side::Right;
  ProofState r = apply_rule(s, Rule::OrI, right);
  auto on_neg = list_applicable(select_goal(r, 2));
  require(on_neg.size() == 1 && on_neg[0].rule == Rule::NotI, "goal ¬p should offer only ¬I");
  r = apply_rule(select_goal(r, 2), Rule::NotI);
  require(list_applicable(select_goal(r, 4)).empty(), "goal ⊥ under assumption p still has applicable rules");
  require(list_applicable(select_resource(select_goal(r, 4), 3)).empty(), "resource p enables a rule");

  std::ostringstream out, err;
  require(cmd_prove(data("excluded_middle_nj.json"), std::nullopt, out, err) == kExitInvalid,
          "NJ palette script should be rejected");
  require(err.str().find("step 1: RuleDisabled") == 0, "expected RuleDisabled at step 1, got " + err.str());
  ScriptOutcome nk = run_script(parse_script(slurp(data("excluded_middle.json"))));
  require(!nk.error && nk.state.complete(), "NK script does not complete");
  require(check_proof(nk.state.proof, nk.state.system).status == CheckStatus::Complete, "checker disagrees");
  double took = seconds_since(t0);
  require(took < 1.0, "took " + std::to_string(took) + " s");
}

void corpus() {
  fs::path dir = data("corpus");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  require(files.size() >= 30, "corpus has " + std::to_string(files.size()) + " scripts");
  for (const auto& f : files) {
    std::ostringstream out, err;
    int code = cmd_prove(f, std::nullopt, out, err);
    require(code == kExitOk, f.filename().string() + ": cmd_prove exit " + std::to_string(code));
    Script script = parse_script(slurp(f));
    require(script.system.name == SystemName::NK, f.filename().string() + " is not an NK script");
    ScriptOutcome r = run_script(script);
    CheckReport report = check_proof(r.state.proof, r.state.system);
    require(report.status == CheckStatus::Complete, f.filename().string() + ": " + report.text());
    std::set<std::string> atoms;
    for (const auto& p : script.premises) oracle::atoms(p, atoms);
    oracle::atoms(script.conclusion, atoms);
    require(atoms.size() <= 4, f.filename().string() + " has more than 4 atoms");
    require(oracle::valid(script.premises, script.conclusion), f.filename().string() + " is not truth-table valid");
  }
}

void eigenvariables() {
  ProofState s = new_proof({parse_formula("P(a)")}, parse_formula("∀x.P(x)"), make_system(SystemName::NK));
  s = select_goal(s, 2);
  RuleArgs w;
  w.witness = parse_term("a");
  try {
    apply_rule(s, Rule::AllI, w);
    throw Failure{"engine accepted a as eigenvariable"};
  } catch (const Error& e) {
    require(e.code() == ErrorCode::EigenvariableViolation, std::string("engine raised ") + e.what());
  }
  Proof forged = apply_rule(s, Rule::AllI).proof;
  ProofLine& l = forged.lines.at(3);
  l.formula = parse_formula("P(a)");
  l.status = LineStatus::Justified;
  l.justification = Justification{Rule::Re, {}, {{1, std::nullopt}}};
  CheckReport r = check_proof(forged, make_system(SystemName::NK));
  bool flagged = std::any_of(r.diagnostics.begin(), r.diagnostics.end(),
                             [](const Diagnostic& d) { return d.code == "EigenvariableViolation"; });
  require(r.status == CheckStatus::Invalid && flagged, "forgery not rejected: " + r.text());

  fs::path dir = scratch();
  std::ostringstream out, err;
  require(cmd_prove(data("universal.json"), dir / "universal.ndp", out, err) == kExitOk, "universal script failed");
  std::ostringstream check_out;
  int code = cmd_check(dir / "universal.ndp", std::nullopt, check_out, err);
  fs::remove_all(dir);
  require(code == kExitOk && check_out.str() == "Complete\n", "legitimate proof: " + check_out.str());
}

void magic_mode() {
  ProofState k = new_proof({}, parse_formula("p → (q → p)"), make_system(SystemName::NK));
  int rounds = run_magic(k);
  require(k.complete(), "p → (q → p) not completed");
  require(rounds <= 10, "used " + std::to_string(rounds) + " rounds");
  ProofState d = new_proof({}, parse_formula("p ∨ q"), make_system(SystemName::NK));
  ProofState before = d;
  run_magic(d);
  require(d == before, "magic changed p ∨ q");
  gen::Rng rng(7001);
  int most = 0;
  for (int i = 0; i < 2000; ++i) {
    ProofState s = new_proof({}, gen::propositional(rng, 1 + static_cast<int>(gen::pick(rng, 7))),
                             make_system(SystemName::NK));
    most = std::max(most, run_magic(s));
  }
  require(most <= 10, "a fuzzed goal needed " + std::to_string(most) + " rounds");
}

void persistence() {
  fs::path dir = scratch();
  ProofState s = paper::build();
  fs::path a = save(s, Mode::Editable, dir / "p.ndp");
  fs::path b = save(s, Mode::Demo, dir / "p.ndu");
  bool same = slurp(a) == slurp(b);
  fs::remove_all(dir);
  require(same, ".ndp and .ndu bytes differ");

  gen::Rng rng(7002);
  for (int i = 0; i < 1000; ++i) {
    ProofState f = gen::random_session(rng, 1 + static_cast<int>(gen::pick(rng, 12)), i % 2 == 1);
    std::string text = serialize(to_document(f));
    require(to_state(deserialize(text)) == f, "round trip " + std::to_string(i) + " lost state");
  }

  RenderedProof third = render(replay(to_document(s), 2));
  std::vector<int> order = {1, 3, 5, 6, 7, 8, 4, 2};
  require(third.rows.size() == order.size(), "third panel has " + std::to_string(third.rows.size()) + " rows");
  for (std::size_t i = 0; i < order.size(); ++i) require(third.rows[i].creation == order[i], "third panel order");
  std::set<int> goals;
  for (const auto& row : third.rows)
    if (row.status == LineStatus::Goal) goals.insert(row.creation);
  require(goals == std::set<int>{6, 8}, "third panel goals");
  require(third.rows[6].justification() == "1,5-6,7-8,∨E" && third.rows[7].justification() == "3-4,¬I",
          "third panel justifications");
}

void undo_inversion() {
  gen::Rng rng(7003);
  for (int i = 0; i < 1000; ++i) {
    ProofState initial = gen::random_session(rng, 0, i % 3 == 0);
    ProofState s = initial;
    int k = 0, target = 1 + static_cast<int>(gen::pick(rng, 12));
    while (k < target && gen::random_application(rng, s)) ++k;
    for (int j = 0; j < k; ++j) s = undo(s);
    require(same_visible_state(s, initial), "session " + std::to_string(i) + " not restored after " +
                                                std::to_string(k) + " undos");
  }
}

void export_fidelity() {
  ProofState s = paper::build();
  require(export_latex(s) == slurp(paper::golden("paper.tex")), "LaTeX differs from golden");
  require(export_unicode(s) == slurp(paper::golden("paper.txt")), "unicode differs from golden");
  std::size_t frames = export_frames(to_document(s)).frames.size();
  require(frames == 7 + 1, "frames export yields " + std::to_string(frames) + " frames, criterion expects 8");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
      {"paper-proof reproduction", paper_proof},
      {"palette pedagogy demo", palette_demo},
      {"checker soundness on the NK corpus", corpus},
      {"eigenvariable enforcement", eigenvariables},
      {"magic mode", magic_mode},
      {"persistence", persistence},
      {"undo inversion", undo_inversion},
      {"export fidelity", export_fidelity},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    try {
      check();
      std::cout << "PASS " << name << "\n";
    } catch (const Failure& f) {
      ++failed;
      std::cout << "FAIL " << name << ": " << f.why << "\n";
    } catch (const std::exception& e) {
      ++failed;
      std::cout << "FAIL " << name << ": " << e.what() << "\n";
    }
  }
  return failed == 0 ? 0 : 1;
}
