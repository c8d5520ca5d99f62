#include <gtest/gtest.h>

#include "causal_cgs/cgs.hpp"

using namespace causal_cgs;

namespace {

// Two agents, one state where both pick 0/1 and two leaves.
Cgs small_game() {
  Cgs g(2, {"s", "l", "r"}, {"p"});
  const std::vector<Move> bin{Move::of(kFalse), Move::of(kTrue)};
  g.set_moves(0, 0, bin);
  g.set_moves(1, 0, bin);
  for (StateId q : {1u, 2u}) {
    g.set_moves(0, q, {Move::noop()});
    g.set_moves(1, q, {Move::noop()});
    g.set_transition(q, {Move::noop(), Move::noop()}, q);
  }
  for (const auto& v : legal_move_vectors(g, 0))
    g.set_transition(0, v, v[0] == v[1] ? 1 : 2);
  g.set_label(2, {0});
  return g;
}

TEST(Cgs, MoveVectorsAreLexicographic) {
  const auto g = small_game();
  const auto vs = legal_move_vectors(g, 0);
  ASSERT_EQ(vs.size(), 4u);
  EXPECT_EQ(vs[1], (MoveVector{Move::of(kFalse), Move::of(kTrue)}));
  EXPECT_EQ(vs[2], (MoveVector{Move::of(kTrue), Move::of(kFalse)}));
  for (std::size_t k = 0; k < vs.size(); ++k) {
    EXPECT_EQ(g.move_vector_index(0, vs[k]), k);
    EXPECT_EQ(g.move_vector_at(0, k), vs[k]);
  }
  EXPECT_EQ(g.num_transitions(), 6u);
  EXPECT_TRUE(g.check_well_formed().empty());
}

TEST(Cgs, IllegalVectorThrows) {
  const auto g = small_game();
  EXPECT_THROW(g.transition(0, {Move::noop(), Move::of(kTrue)}), CgsError);
  EXPECT_THROW(g.transition(1, {Move::of(kTrue), Move::noop()}), CgsError);
}

TEST(Cgs, NoopDiffersFromEveryValue) {
  EXPECT_NE(Move::noop(), Move::of(kFalse));
  EXPECT_TRUE(Move::noop().is_noop());
  EXPECT_FALSE(Move::of(kFalse).is_noop());
}

TEST(Cgs, IncompleteTransitionsReported) {
  Cgs g(1, {"s", "t"}, {});
  g.set_moves(0, 0, {Move::of(kFalse), Move::of(kTrue)});
  g.set_moves(0, 1, {Move::noop()});
  g.set_transition(0, {Move::of(kFalse)}, 1);
  g.set_transition(1, {Move::noop()}, 1);
  EXPECT_FALSE(g.check_well_formed().empty());
}

TEST(Play, StopsAtSelfLoop) {
  const auto g = small_game();
  StrategyProfile p;
  p.set(0, [](std::span<const StateId> h) { return h.back() == 0 ? Move::of(kTrue) : Move::noop(); });
  p.set(1, [](std::span<const StateId> h) { return h.back() == 0 ? Move::of(kFalse) : Move::noop(); });
  EXPECT_TRUE(p.total(2));
  EXPECT_EQ(play(g, 0, p), (std::vector<StateId>{0, 2}));
}

TEST(Play, ComposePrefersFirst) {
  const auto g = small_game();
  auto fixed = [](Symbol s) {
    return [s](std::span<const StateId> h) { return h.back() == 0 ? Move::of(s) : Move::noop(); };
  };
  StrategyProfile base, dev;
  base.set(0, fixed(kFalse));
  base.set(1, fixed(kFalse));
  dev.set(1, fixed(kTrue));
  const auto both = StrategyProfile::compose(dev, base);
  EXPECT_EQ(both.agents(), (std::set<AgentId>{0, 1}));
  EXPECT_EQ(play(g, 0, base).back(), 1u);
  EXPECT_EQ(play(g, 0, both).back(), 2u);
  EXPECT_EQ(play(g, 0, both, 0), std::vector<StateId>{0});
}

TEST(Play, PartialProfileThrows) {
  const auto g = small_game();
  StrategyProfile p;
  p.set(0, [](std::span<const StateId>) { return Move::of(kTrue); });
  EXPECT_FALSE(p.total(2));
  EXPECT_ANY_THROW(play(g, 0, p));
}

}  // namespace
