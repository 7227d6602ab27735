#include <algorithm>
#include <string>
#include <vector>

#include <doctest.h>

#include "virolab/codec.hpp"
#include "virolab/envmodel.hpp"
#include "virolab/interp.hpp"
#include "virolab/lang.hpp"
#include "virolab/recursion.hpp"
#include "virolab/virusforge.hpp"

using namespace virolab;

namespace {

constexpr std::uint64_t kFuel = 1'000'000;

Env run_env(const Word& v, const Env& e) {
  RunResult r = run_external(v, e, Fuel{kFuel});
  REQUIRE(r.kind == RunResult::Kind::env);
  return r.env;
}

Word value_of(const Word& p, const Word& x) {
  EvalOutcome out = interp(p, x, Fuel{kFuel});
  REQUIRE(out.is_value());
  return out.value;
}

Blueprint plain(VirusClass cls) {
  Blueprint bp;
  bp.cls = cls;
  return bp;
}

const Word kIdHost = "x0";
const Word kDelHost = "(tup)";
const Word kSwapHost = "(pair (snd x0) (fst x0))";

std::vector<Env> probe_envs() {
  return {
      Env{{"#a"}, {kIdHost}},
      Env{{"#a", "#bb"}, {kIdHost, kDelHost}},
      Env{{"#note"}, {kSwapHost, kIdHost, kDelHost}},
      Env{{"#x"}, {"(fst x0)", kIdHost}},
      Env{{"#y", "#z"}, {kDelHost, "(cat (fst x0) (fst x0))", kIdHost}},
  };
}

}  // namespace

TEST_CASE("blueprint validation") {
  Blueprint bp = plain(VirusClass::overwriter);
  bp.search.target = TargetKind::data;
  CHECK_THROWS_AS((void)forge(bp), InvalidBlueprint);

  bp = plain(VirusClass::ecto_symbiote);
  bp.search.predicate = PredicateKind::prefix_match;
  CHECK_THROWS_AS((void)forge(bp), InvalidBlueprint);  // empty prefix

  bp = plain(VirusClass::document);
  CHECK_THROWS_AS((void)forge(bp), InvalidBlueprint);  // no renderer
  bp.tool = "(pair x0";
  CHECK_THROWS_AS((void)forge(bp), SyntaxError);
  bp.tool = make_doc_renderer();
  bp.condition = {ConditionKind::requires_program, "x0"};
  CHECK_THROWS_AS((void)forge(bp), InvalidBlueprint);  // must require the renderer

  bp = plain(VirusClass::source);
  bp.tool = make_source_compiler();
  bp.order = ConcatOrder::host_first;
  CHECK_THROWS_AS((void)forge(bp), InvalidBlueprint);

  bp = plain(VirusClass::multipartite);
  CHECK_THROWS_AS((void)forge(bp), InvalidBlueprint);  // no parts
  bp.parts = {plain(VirusClass::overwriter), plain(VirusClass::document)};
  CHECK_THROWS_AS((void)forge(bp), InvalidBlueprint);

  bp = plain(VirusClass::polymorphic);
  bp.transform = "rename_variables";
  CHECK_THROWS_AS((void)forge(bp), InvalidBlueprint);

  bp = plain(VirusClass::companion);
  bp.condition = {ConditionKind::requires_program, ""};
  CHECK_THROWS_AS((void)forge(bp), InvalidBlueprint);
}

TEST_CASE("forging is deterministic and viruses are well formed") {
  std::vector<Blueprint> bps;
  for (VirusClass cls :
       {VirusClass::overwriter, VirusClass::ecto_symbiote, VirusClass::duplicator,
        VirusClass::companion, VirusClass::launcher, VirusClass::generation_counter,
        VirusClass::polymorphic}) {
    bps.push_back(plain(cls));
  }
  {
    Blueprint bp = plain(VirusClass::document);
    bp.tool = make_doc_renderer();
    bps.push_back(bp);
    bp = plain(VirusClass::source);
    bp.tool = make_source_compiler();
    bps.push_back(bp);
    Blueprint mp = plain(VirusClass::multipartite);
    Blueprint pd = plain(VirusClass::document);
    pd.tool = make_doc_renderer();
    mp.parts = {plain(VirusClass::ecto_symbiote), pd};
    bps.push_back(mp);
  }
  for (const Blueprint& bp : bps) {
    CAPTURE(virus_class_name(bp.cls));
    Forged a = forge(bp);
    Forged b = forge(bp);
    CHECK(a.v == b.v);
    CHECK(a.equations == b.equations);
    CHECK(lang::parses(a.v));
    CHECK_FALSE(is_data_word(a.v));
    // every forged virus is a specialization product and so carries the prefix
    CHECK(a.v.compare(0, smn_prefix().size(), smn_prefix()) == 0);
    CHECK_FALSE(a.transcript.empty());
  }
}

TEST_CASE("overwriter replaces every target with itself") {
  Forged f = forge(plain(VirusClass::overwriter));
  Env before{{"#doc"}, {"x0", "(fst x0)", "(tup x0 x0)"}};
  Env after = run_env(f.v, before);
  CHECK(after.data == before.data);
  REQUIRE(after.programs.size() == 3);
  for (const Word& p : after.programs) CHECK(p == f.v);
  CHECK(f.infect_program("anything") == f.v);

  SUBCASE("no programs means nothing to do") {
    Env empty_sel{{"#doc"}, {}};
    CHECK(run_env(f.v, empty_sel) == empty_sel);
  }
  SUBCASE("already-infected members are left alone") {
    Env again = run_env(f.v, after);
    CHECK(again == after);
  }
  SUBCASE("failed condition imitates") {
    Blueprint bp = plain(VirusClass::overwriter);
    bp.condition = {ConditionKind::requires_program, "(snd x0)"};
    Forged g = forge(bp);
    CHECK(run_env(g.v, before) == before);  // trigger absent
    Env armed = before;
    armed.programs.push_back("(snd x0)");
    Env hit = run_env(g.v, armed);
    CHECK(hit.programs[0] == g.v);
    CHECK(hit.programs[3] == g.v);  // the trigger itself is a target too
  }
}

TEST_CASE("ecto symbiote composes itself before the host") {
  Forged f = forge(plain(VirusClass::ecto_symbiote));
  for (const Env& e : probe_envs()) {
    Env after = run_env(f.v, e);
    REQUIRE(after.programs.size() == e.programs.size());
    Word spread = value_of(f.v, encode_env(e));
    for (std::size_t i = 0; i < e.programs.size(); ++i) {
      CAPTURE(i);
      Word image = after.programs[i];
      CHECK(image == f.infect_program(e.programs[i]));
      // the image behaves as: infect first, then the original host
      EvalOutcome lhs = interp(image, encode_env(e), Fuel{kFuel});
      EvalOutcome rhs = interp(e.programs[i], spread, Fuel{kFuel});
      CHECK(lhs.kind == rhs.kind);
      CHECK(lhs.value == rhs.value);
    }
  }

  SUBCASE("the host is recoverable from the image") {
    for (const Word& host : {kIdHost, kDelHost, kSwapHost}) {
      auto parts = sequenced_parts(f.infect_program(host));
      REQUIRE(parts);
      CHECK(parts->v == f.v);
      CHECK(parts->j == host);
      CHECK(parts->order == ConcatOrder::virus_first);
    }
    CHECK_FALSE(sequenced_parts(f.v));
    CHECK_FALSE(sequenced_parts("x0"));
  }

  SUBCASE("host-first order flips the composition") {
    Blueprint bp = plain(VirusClass::ecto_symbiote);
    bp.order = ConcatOrder::host_first;
    Forged g = forge(bp);
    Env e{{"#a"}, {kSwapHost}};
    Env after = run_env(g.v, e);
    EvalOutcome lhs = interp(after.programs[0], encode_env(e), Fuel{kFuel});
    Word host_out = value_of(kSwapHost, encode_env(e));
    EvalOutcome rhs = interp(g.v, host_out, Fuel{kFuel});
    REQUIRE(lhs.is_value());
    CHECK(lhs.value == rhs.value);
    auto parts = sequenced_parts(after.programs[0]);
    REQUIRE(parts);
    CHECK(parts->order == ConcatOrder::host_first);
  }

  SUBCASE("a deleting host erases the infected environment") {
    Env e{{"#keep"}, {kDelHost, kIdHost}};
    Env after = run_env(f.v, e);
    RunResult gone = run_member(after, 0, Fuel{kFuel});
    REQUIRE(gone.kind == RunResult::Kind::env);
    CHECK(gone.raw == "");
    CHECK(gone.env == Env{});
  }
}

TEST_CASE("duplicator appends one copy of itself per target") {
  Forged f = forge(plain(VirusClass::duplicator));
  Env e{{"#d"}, {"x0", "(fst x0)"}};
  Env after = run_env(f.v, e);
  REQUIRE(after.programs.size() == 4);
  CHECK(after.programs[0] == "x0");
  CHECK(after.programs[1] == "(fst x0)");
  CHECK(after.programs[2] == f.v);
  CHECK(after.programs[3] == f.v);
  // the copies are not targets, the originals still are
  Env again = run_env(f.v, after);
  CHECK(again.programs.size() == 6);
}

TEST_CASE("document virus rides the script slot") {
  Blueprint bp = plain(VirusClass::document);
  bp.tool = make_doc_renderer();
  Forged f = forge(bp);
  const Word body = "The quick brown fox.";
  const Word script = "(pair (fst x0) (snd x0))";

  SUBCASE("rendering an infected document matches rendering after infection") {
    for (Env e : probe_envs()) {
      e.data.push_back(make_document_word(script, body));
      e.programs.push_back(make_doc_renderer());
      Env after = run_env(f.v, e);
      const Word& infected = after.data.back();
      CHECK(infected == f.infect_data(e.data.back()));
      EvalOutcome lhs = interp(make_doc_renderer(),
                               pair_words(infected, encode_env(e)), Fuel{kFuel});
      Word spread = value_of(f.v, encode_env(e));
      EvalOutcome rhs = interp(make_doc_renderer(),
                               pair_words(e.data.back(), spread), Fuel{kFuel});
      REQUIRE(lhs.is_value());
      CHECK(lhs.kind == rhs.kind);
      CHECK(lhs.value == rhs.value);
    }
  }

  SUBCASE("an empty script slot receives the virus alone") {
    Env e{{make_document_word("", body)}, {make_doc_renderer()}};
    Env after = run_env(f.v, e);
    auto parts = document_parts(after.data[0]);
    REQUIRE(parts);
    CHECK(parts->script == f.v);
    CHECK(parts->body == body);
  }

  SUBCASE("a populated script slot is sequenced, not overwritten") {
    Env e{{make_document_word(script, body)}, {make_doc_renderer()}};
    Env after = run_env(f.v, e);
    auto parts = document_parts(after.data[0]);
    REQUIRE(parts);
    auto seq = sequenced_parts(parts->script);
    REQUIRE(seq);
    CHECK(seq->v == f.v);
    CHECK(seq->j == script);
    CHECK(parts->body == body);
  }

  SUBCASE("without the renderer the virus imitates") {
    Env e{{make_document_word("", body)}, {"x0"}};
    CHECK(run_env(f.v, e) == e);
  }

  SUBCASE("plain data is never touched") {
    Env e{{"#plain", make_document_word("", body)}, {make_doc_renderer()}};
    Env after = run_env(f.v, e);
    CHECK(after.data[0] == "#plain");
    CHECK(f.infect_data("#plain") == "#plain");
  }
}

TEST_CASE("source virus compiles into the binary") {
  Blueprint bp = plain(VirusClass::source);
  bp.tool = make_source_compiler();
  Forged f = forge(bp);
  const Word embedded = "(pair x0 x0)";
  const Word src = make_source_word(embedded);

  SUBCASE("clean sources compile to the embedded program verbatim") {
    CHECK(value_of(make_source_compiler(), src) == embedded);
  }

  SUBCASE("compiling an infected source then running matches infect-then-run") {
    for (Env e : probe_envs()) {
      e.data.push_back(src);
      e.programs.push_back(make_source_compiler());
      Env after = run_env(f.v, e);
      const Word& infected = after.data.back();
      CHECK(infected == f.infect_data(src));
      Word compiled = value_of(make_source_compiler(), infected);
      EvalOutcome lhs = interp(compiled, encode_env(e), Fuel{kFuel});
      Word spread = value_of(f.v, encode_env(e));
      EvalOutcome rhs = interp(embedded, spread, Fuel{kFuel});
      CHECK(lhs.kind == rhs.kind);
      CHECK(lhs.value == rhs.value);
    }
  }

  SUBCASE("without the compiler the virus imitates") {
    Env e{{src}, {"x0"}};
    CHECK(run_env(f.v, e) == e);
  }
}

TEST_CASE("companion displaces hosts and keeps them runnable") {
  Forged f = forge(plain(VirusClass::companion));
  Env e{{"#d"}, {"(cat x0 '00112233445566778899aabbccddeeff')", kIdHost, kSwapHost}};
  Env after = run_env(f.v, e);
  REQUIRE(after.programs.size() == 6);

  SUBCASE("every original is preserved verbatim at the end") {
    CHECK(after.programs[3] == e.programs[0]);
    CHECK(after.programs[4] == e.programs[1]);
    CHECK(after.programs[5] == e.programs[2]);
  }

  SUBCASE("stubs are the documented form, counted from the tuple end") {
    CHECK(after.programs[0] == f.companion_form(3));
    CHECK(after.programs[1] == f.companion_form(2));
    CHECK(after.programs[2] == f.companion_form(1));
  }

  SUBCASE("a long host never appears inside its stub") {
    const Word& host = e.programs[0];
    REQUIRE(host.size() >= 16);
    CHECK(after.programs[0].find(host) == std::string::npos);
  }

  SUBCASE("each stub behaves as: infect the rest, then the displaced original") {
    for (std::size_t i = 0; i < 3; ++i) {
      CAPTURE(i);
      RunResult member = run_member(after, i, Fuel{kFuel});
      Env rest = env_without_program(after, i);
      Word spread = value_of(f.v, encode_env(rest));
      EvalOutcome rhs = interp(e.programs[i], spread, Fuel{kFuel});
      CHECK(member.consumed > 0);
      CHECK((member.kind == RunResult::Kind::env ||
             member.kind == RunResult::Kind::malformed) == rhs.is_value());
      if (rhs.is_value()) CHECK(member.raw == rhs.value);
    }
  }
}

TEST_CASE("launcher stores itself once and launches from stubs") {
  Forged f = forge(plain(VirusClass::launcher));
  Env e{{"#d"}, {kIdHost, kSwapHost, kDelHost}};
  Env after = run_env(f.v, e);
  REQUIRE(after.programs.size() == 4);
  CHECK(after.programs[3] == f.v);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(after.programs[i] == f.infect_program(e.programs[i]));
    CHECK(after.programs[i].size() < f.v.size());
  }

  SUBCASE("re-running on the infected environment changes nothing") {
    CHECK(run_env(f.v, after) == after);
  }

  SUBCASE("nothing to infect, nothing stored") {
    Env none{{"#d"}, {}};
    CHECK(run_env(f.v, none) == none);
  }

  SUBCASE("stubs run the stored virus, then the original") {
    for (std::size_t i = 0; i < 3; ++i) {
      CAPTURE(i);
      RunResult member = run_member(after, i, Fuel{kFuel});
      Env rest = env_without_program(after, i);
      Word spread = value_of(f.v, encode_env(rest));
      EvalOutcome rhs = interp(e.programs[i], spread, Fuel{kFuel});
      CHECK((member.kind == RunResult::Kind::env ||
             member.kind == RunResult::Kind::malformed) == rhs.is_value());
      if (rhs.is_value()) CHECK(member.raw == rhs.value);
    }
  }
}

TEST_CASE("multipartite infects both sections in one pass") {
  Blueprint bp = plain(VirusClass::multipartite);
  Blueprint pd = plain(VirusClass::document);
  pd.tool = make_doc_renderer();
  bp.parts = {plain(VirusClass::ecto_symbiote), pd};
  Forged f = forge(bp);
  const Word doc = make_document_word("", "carrier");

  SUBCASE("both sections present") {
    Env e{{"#plain", doc}, {make_doc_renderer(), kIdHost}};
    Env after = run_env(f.v, e);
    CHECK(after.data[0] == "#plain");
    CHECK(after.data[1] == f.infect_data(doc));
    CHECK(after.programs[0] == f.infect_program(make_doc_renderer()));
    CHECK(after.programs[1] == f.infect_program(kIdHost));
  }

  SUBCASE("programs only: acts as the program part alone") {
    Env e{{"#plain"}, {kIdHost, kDelHost}};
    Env after = run_env(f.v, e);
    CHECK(after.data == e.data);
    CHECK(after.programs[0] == f.infect_program(kIdHost));
    CHECK(after.programs[1] == f.infect_program(kDelHost));
  }

  SUBCASE("documents without the renderer stay clean") {
    Env e{{doc}, {kIdHost}};
    Env after = run_env(f.v, e);
    CHECK(after.data == e.data);
    CHECK(after.programs[0] == f.infect_program(kIdHost));
  }

  SUBCASE("nothing to infect, nothing changes") {
    Env e{{"#x"}, {}};
    CHECK(run_env(f.v, e) == e);
  }
}

TEST_CASE("generation counter stamps the next depth into every image") {
  Forged f = forge(plain(VirusClass::generation_counter));
  CHECK(f.v == f.phi(nat_word(0)));
  Env e{{"#d"}, {kIdHost, kSwapHost, kDelHost, kIdHost, "(fst x0)"}};
  for (std::uint64_t y = 0; y < 4; ++y) {
    CAPTURE(y);
    Word form = f.phi(nat_word(y));
    Env after = run_env(form, e);
    Word want = f.phi(nat_word(y + 1));
    REQUIRE(after.programs.size() == 5);
    for (const Word& p : after.programs) CHECK(p == want);
  }

  SUBCASE("the depth is recoverable from the form") {
    for (std::uint64_t y : {0ull, 1ull, 7ull, 300ull}) {
      auto parts = smn_parts(f.phi(nat_word(y)));
      REQUIRE(parts);
      CHECK(parts->second == nat_word(y));
    }
  }

  SUBCASE("deeper forms keep replacing with their own successor") {
    Env once = run_env(f.v, e);
    Env twice = run_env(once.programs[0], e);
    CHECK(twice.programs[0] == f.phi(nat_word(2)));
  }
}

TEST_CASE("polymorphic padding changes the spelling every generation") {
  Forged f = forge(plain(VirusClass::polymorphic));
  Env e{{"#d"}, {kIdHost, kSwapHost}};

  // derive five generations behaviorally: each one is the word the previous
  // generation writes into its targets
  std::vector<Word> gen{f.v};
  for (int k = 0; k < 4; ++k) {
    Env after = run_env(gen.back(), e);
    gen.push_back(after.programs[0]);
    CHECK(after.programs[1] == gen.back());
  }

  SUBCASE("the first image is exactly Pad of the virus") {
    CHECK(gen[1] == f.pad(f.v));
  }

  SUBCASE("every later image is Pad of the junk-wrapped seed chain") {
    Word seed = f.v;
    for (std::size_t k = 1; k < gen.size(); ++k) {
      CAPTURE(k);
      CHECK(gen[k] == f.pad(seed));
      seed = f.tau(seed);
    }
  }

  SUBCASE("generations are pairwise distinct words") {
    for (std::size_t a = 0; a < gen.size(); ++a)
      for (std::size_t b = a + 1; b < gen.size(); ++b) CHECK(gen[a] != gen[b]);
  }

  SUBCASE("generations collapse to one word under junk normalization") {
    Word canon = junk_normal_form(gen[1]);
    for (std::size_t k = 2; k < gen.size(); ++k)
      CHECK(junk_normal_form(gen[k]) == canon);
    CHECK(junk_normal_form(f.tau(f.tau(f.v))) == f.v);
  }

  SUBCASE("generations agree on probes up to junk normalization") {
    for (std::size_t k = 1; k + 1 < gen.size(); ++k) {
      for (const Env& pe : probe_envs()) {
        Env a = run_env(gen[k], pe);
        Env b = run_env(gen[k + 1], pe);
        CHECK(a.data == b.data);
        REQUIRE(a.programs.size() == b.programs.size());
        for (std::size_t i = 0; i < a.programs.size(); ++i)
          CHECK(junk_normal_form(a.programs[i]) == junk_normal_form(b.programs[i]));
      }
    }
  }

  SUBCASE("the junk wrapper preserves behavior exactly") {
    for (const Word& p : {gen[1], f.v, kSwapHost}) {
      Word wrapped = f.tau(p);
      for (const Env& pe : probe_envs()) {
        EvalOutcome a = interp(wrapped, encode_env(pe), Fuel{kFuel});
        EvalOutcome b = interp(p, encode_env(pe), Fuel{kFuel});
        CHECK(a.kind == b.kind);
        CHECK(a.value == b.value);
      }
    }
  }

  SUBCASE("the padding equation holds for arbitrary seeds") {
    for (const Word& j : {kSwapHost, Word("(fst x0)"), f.v}) {
      Env after = run_env(f.pad(j), e);
      CHECK(after.programs[0] == f.pad(f.tau(j)));
    }
  }
}

TEST_CASE("image dependence on the host separates the classes") {
  Forged over = forge(plain(VirusClass::overwriter));
  Forged ecto = forge(plain(VirusClass::ecto_symbiote));
  Forged poly = forge(plain(VirusClass::polymorphic));
  // overwriter and polymorphic images ignore the host entirely
  CHECK(over.infect_program(kIdHost) == over.infect_program(kSwapHost));
  CHECK(poly.infect_program(kIdHost) == poly.infect_program(kSwapHost));
  // ecto images embed it
  CHECK(ecto.infect_program(kIdHost) != ecto.infect_program(kSwapHost));
  // companion stubs depend only on the location, never the host bytes
  Forged comp = forge(plain(VirusClass::companion));
  CHECK(comp.companion_form(2) == comp.companion_form(2));
  CHECK(comp.companion_form(1) != comp.companion_form(2));
}
