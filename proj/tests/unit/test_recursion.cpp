#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "virolab/codec.hpp"
#include "virolab/interp.hpp"
#include "virolab/lang.hpp"
#include "virolab/recursion.hpp"

using namespace virolab;

namespace {

constexpr std::uint64_t kProbeFuel = 1'000'000;

Word value_of(const Word& prog, const Word& x) {
  EvalOutcome r = interp(prog, x, Fuel{kProbeFuel});
  REQUIRE(r.is_value());
  return r.value;
}

std::vector<Word> random_probes(std::uint64_t seed, int count, int maxlen = 8) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(0, maxlen);
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<Word> out;
  for (int i = 0; i < count; ++i) {
    Word w;
    int n = len(rng);
    for (int j = 0; j < n; ++j) w.push_back(static_cast<char>(byte(rng)));
    out.push_back(std::move(w));
  }
  return out;
}

// Agreement of two closures on a probe, when neither runs out of fuel.
void check_agree(const Word& lhs_prog, const Word& rhs_prog, const Word& lhs_in,
                 const Word& rhs_in) {
  EvalOutcome l = interp(lhs_prog, lhs_in, Fuel{kProbeFuel});
  EvalOutcome r = interp(rhs_prog, rhs_in, Fuel{kProbeFuel});
  REQUIRE_FALSE(l.out_of_fuel());
  REQUIRE_FALSE(r.out_of_fuel());
  CHECK(l.kind == r.kind);
  if (l.is_value()) CHECK(l.value == r.value);
}

}  // namespace

TEST_CASE("kleene_fix rejects broken bodies") {
  CHECK_THROWS_AS((void)kleene_fix("(fst"), SyntaxError);
  CHECK_THROWS_AS((void)kleene_fix("#"), SyntaxError);
  CHECK_THROWS_AS((void)double_fix("(fst x0)", "x0 x0"), SyntaxError);
  CHECK_THROWS_AS((void)explicit_fix(""), SyntaxError);
}

TEST_CASE("first projection yields a quine") {
  FixedPoint fp = kleene_fix("(fst x0)");
  REQUIRE(lang::parses(fp.e));
  for (const Word& y : {Word(""), Word("\x01"), Word("#payload")}) {
    CHECK(value_of(fp.e, y) == fp.e);
  }
}

TEST_CASE("second projection yields identity") {
  FixedPoint fp = kleene_fix("(snd x0)");
  for (const Word& y : random_probes(1, 10)) {
    CHECK(value_of(fp.e, y) == y);
  }
}

TEST_CASE("fixed point size is exactly linear in the body") {
  for (const Word& body :
       {Word("(fst x0)"), Word("(pair (snd x0) (fst x0))"),
        Word(lang::lit(random_probes(7, 1, 300)[0]))}) {
    FixedPoint fp = kleene_fix(body);
    CHECK(fp.e.size() == 6 * body.size() + 169);
    CHECK(fp.e.compare(0, smn_prefix().size(), smn_prefix()) == 0);
  }
}

TEST_CASE("transcript records the staged construction") {
  FixedPoint fp = kleene_fix("(fst x0)");
  REQUIRE(fp.transcript.size() == 2);
  CHECK(fp.transcript[0].label == "frame");
  CHECK(fp.transcript[1].label == "fixed_point");
  CHECK(lang::parses(fp.transcript[0].text));
  CHECK(fp.transcript[1].text == fp.e);
}

TEST_CASE("fixed point equation on a spread of bodies") {
  const std::vector<Word> bodies = {
      "(fst x0)",
      "(snd x0)",
      "(pair (snd x0) (fst x0))",
      "(cat (fst x0) (snd x0))",
      "(tup (snd x0) (fst x0) '')",
      lang::sx({"take", "(snd x0)", lang::natlit(2)}),
      "(inc (snd x0))",
      "(ifeq (snd x0) '' (fst x0) (snd x0))",
  };
  std::uint64_t seed = 100;
  for (const Word& body : bodies) {
    CAPTURE(body);
    FixedPoint fp = kleene_fix(body);
    for (const Word& x : random_probes(seed++, 20)) {
      check_agree(fp.e, body, x, pair_words(fp.e, x));
    }
  }
}

TEST_CASE("double fix: mutual quine pair") {
  auto [fp1, fp2] = double_fix("(fst (snd x0))", "(fst x0)");
  REQUIRE(lang::parses(fp1.e));
  REQUIRE(lang::parses(fp2.e));
  CHECK(fp1.e != fp2.e);
  for (const Word& x : random_probes(21, 5)) {
    CHECK(value_of(fp1.e, x) == fp2.e);  // e1 prints e2, to the byte
    CHECK(value_of(fp2.e, x) == fp1.e);  // and e2 prints e1
  }
}

TEST_CASE("double fix: first projection twice") {
  auto [fp1, fp2] = double_fix("(fst x0)", "(fst x0)");
  for (const Word& x : random_probes(22, 5)) {
    CHECK(value_of(fp1.e, x) == fp1.e);  // e1 is a quine
    CHECK(value_of(fp2.e, x) == fp1.e);  // e2 prints e1
  }
}

TEST_CASE("double fix: equal bodies give extensionally equal programs") {
  Word body = "(cat (snd (snd x0)) '07')";
  auto [fp1, fp2] = double_fix(body, body);
  CHECK(fp1.e != fp2.e);
  for (const Word& x : random_probes(23, 10)) {
    CHECK(value_of(fp1.e, x) == value_of(fp2.e, x));
    CHECK(value_of(fp1.e, x) == x + "\x07");
  }
}

TEST_CASE("double fix equations on a spread of body pairs") {
  const std::vector<std::pair<Word, Word>> pairs = {
      {"(fst (snd x0))", "(fst x0)"},
      {"(cat (fst (snd x0)) (snd (snd x0)))", "(snd (snd x0))"},
      {"(ifeq (snd (snd x0)) '' (fst x0) (snd (snd x0)))",
       "(pair (fst x0) (fst (snd x0)))"},
  };
  std::uint64_t seed = 300;
  for (const auto& [f, g] : pairs) {
    CAPTURE(f);
    CAPTURE(g);
    auto [fp1, fp2] = double_fix(f, g);
    for (const Word& x : random_probes(seed++, 20)) {
      check_agree(fp1.e, f, x, triple_word(fp1.e, fp2.e, x));
      check_agree(fp2.e, g, x, triple_word(fp1.e, fp2.e, x));
    }
  }
}

TEST_CASE("explicit fix: third projection gives identity at every depth") {
  ExplicitFix ef = explicit_fix("(snd (snd x0))");
  for (std::uint64_t y = 0; y < 4; ++y) {
    Word q = ef.apply(nat_word(y));
    REQUIRE(lang::parses(q));
    CHECK(value_of(ef.e, nat_word(y)) == q);  // host build == in-language build
    for (const Word& x : random_probes(40 + y, 5)) {
      CHECK(value_of(q, x) == x);
    }
  }
}

TEST_CASE("explicit fix: second projection gives constant programs") {
  ExplicitFix ef = explicit_fix("(fst (snd x0))");
  for (std::uint64_t y = 0; y < 4; ++y) {
    Word q = ef.apply(nat_word(y));
    for (const Word& x : random_probes(50 + y, 5)) {
      CHECK(value_of(q, x) == nat_word(y));
    }
  }
}

TEST_CASE("explicit fix equation on the full triple") {
  Word body = "(tup (fst (snd x0)) (snd (snd x0)))";  // (y, x) as a pair-list
  ExplicitFix ef = explicit_fix(body);
  std::uint64_t seed = 60;
  for (std::uint64_t y = 0; y < 4; ++y) {
    Word q = ef.apply(nat_word(y));
    for (const Word& x : random_probes(seed++, 5)) {
      check_agree(q, body, x, triple_word(ef.e, nat_word(y), x));
    }
  }
}

TEST_CASE("explicit fix generator is total") {
  ExplicitFix ef = explicit_fix("(snd (snd x0))");
  for (const Word& y : random_probes(70, 10, 20)) {
    EvalOutcome r = interp(ef.e, y, Fuel{kProbeFuel});
    REQUIRE(r.is_value());
    CHECK(r.value == ef.apply(y));
  }
  CHECK(interp(ef.e, "#", Fuel{kProbeFuel}).is_value());
}

TEST_CASE("emitted generation programs carry their parameter outermost") {
  ExplicitFix ef = explicit_fix("(fst (snd x0))");
  for (const Word& y : {Word(""), Word("\x03"), Word("#odd bytes\xff")}) {
    Word q = ef.apply(y);
    auto r = lang::parse(q);
    REQUIRE(r);
    const auto& root = r.program->nodes[r.program->root];
    REQUIRE(root.op == lang::Op::let);
    const auto& head = r.program->nodes[root.kids[0]];
    REQUIRE(head.op == lang::Op::pair);
    const auto& constant = r.program->nodes[head.kids[0]];
    REQUIRE(constant.op == lang::Op::lit);
    CHECK(constant.bytes == y);
  }
}
