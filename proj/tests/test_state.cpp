#include <gtest/gtest.h>

#include <vector>

#include "ndp/state.hpp"
#include "support/gen.hpp"
#include "support/paper.hpp"

using namespace ndp;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ParseError;
}

}  // namespace

TEST(Undo, RevertsNegationIntroduction) {
  ProofState start = paper::start();
  ProofState s = paper::build(1);
  ProofState u = undo(s);
  EXPECT_EQ(u.proof, start.proof);
  EXPECT_EQ(u.proof.next_creation, 3);
  EXPECT_TRUE(same_visible_state(u, start));
}

TEST(Undo, NothingToUndoOnFreshProof) {
  EXPECT_EQ(code_of([] { undo(paper::start()); }), ErrorCode::NothingToUndo);
  EXPECT_EQ(code_of([] { undo(select_goal(paper::start(), 2)); }), ErrorCode::NothingToUndo);
}

TEST(Undo, SkipsSelections) {
  ProofState one = paper::build(1);
  ProofState two = paper::build(2);
  ProofState selected = select_resource(select_goal(two, 6), 5);
  ProofState u = undo(selected);
  EXPECT_EQ(u.proof, one.proof);
}

TEST(Undo, RestoresSelectionOfPriorSnapshot) {
  ProofState two = paper::build(2);
  ProofState three = paper::build(3);
  EXPECT_EQ(undo(three).proof.selection, two.proof.selection);
  EXPECT_EQ(undo(three).proof.next_creation, two.proof.next_creation);
}

TEST(Redo, ReappliesUndoneMove) {
  ProofState s = paper::build(3);
  ProofState r = redo(undo(undo(s)));
  EXPECT_EQ(r.proof, paper::build(2).proof);
  EXPECT_EQ(redo(r).proof, s.proof);
  EXPECT_EQ(code_of([&] { redo(s); }), ErrorCode::NothingToRedo);
}

TEST(Redo, NewMoveDropsRedoTail) {
  ProofState s = undo(paper::build(2));
  s = apply_rule(select_resource(select_goal(s, 4), 1), Rule::DoubleNegE);
  EXPECT_EQ(code_of([&] { redo(s); }), ErrorCode::NothingToRedo);
  EXPECT_EQ(s.history.cursor, s.history.events.size());
}

TEST(Undo, MagicIsOneMove) {
  ProofState s = new_proof({}, parse_formula("p → q → p"), make_system(SystemName::NK));
  ProofState m = magic(s);
  ASSERT_TRUE(m.complete());
  EXPECT_EQ(undo(m).proof, s.proof);
  EXPECT_EQ(redo(undo(m)).proof, m.proof);
}

TEST(Undo, InversionProperty) {
  gen::Rng rng(101);
  for (int i = 0; i < 500; ++i) {
    ProofState initial = gen::random_session(rng, 0, i % 3 == 0);
    ProofState s = initial;
    int k = 0;
    int target = 1 + static_cast<int>(gen::pick(rng, 12));
    while (k < target && gen::random_application(rng, s)) ++k;
    ASSERT_EQ(static_cast<int>(s.history.applications()), k);
    for (int j = 0; j < k; ++j) s = undo(s);
    ASSERT_TRUE(same_visible_state(s, initial));
    ASSERT_EQ(s.history.cursor, 0u);
  }
}

TEST(Replay, EveryPrefixMatchesLiveState) {
  gen::Rng rng(102);
  for (int i = 0; i < 200; ++i) {
    ProofState s = gen::random_session(rng, 0, i % 2 == 1);
    std::vector<Proof> live = {s.proof};
    for (int k = 0; k < 12 && gen::random_application(rng, s); ++k) live.push_back(s.proof);
    for (std::size_t k = 0; k < live.size(); ++k) {
      Proof replayed = proof_after_applications(s, k);
      Proof expected = live[k];
      ASSERT_EQ(replayed.lines, expected.lines);
      ASSERT_EQ(replayed.layout, expected.layout);
      ASSERT_EQ(replayed.next_creation, expected.next_creation);
    }
  }
}

TEST(Replay, RebuildIsIdentity) {
  gen::Rng rng(103);
  for (int i = 0; i < 200; ++i) {
    ProofState s = gen::random_session(rng, 12, i % 2 == 1);
    ProofState r = s;
    rebuild(r);
    ASSERT_EQ(r, s);
  }
}

TEST(Replay, BadEventReportsIndex) {
  ProofState s = paper::build(2);
  s.history.events[1].steps[0].goal = 99;
  try {
    rebuild(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ReplayError);
    ASSERT_TRUE(e.at());
    EXPECT_EQ(*e.at(), 1);
  }
}

TEST(History, RecordsResolvedArguments) {
  ProofState s = new_proof({}, parse_formula("∀x.(P(x) → P(x))"), make_system(SystemName::NK));
  s = apply_rule(select_goal(s, 1), Rule::AllI);
  const Event& e = s.history.events.back();
  ASSERT_EQ(e.kind, EventKind::Apply);
  ASSERT_TRUE(e.steps[0].args.witness);
  EXPECT_EQ(*e.steps[0].args.witness, Term::constant("a1"));
}
