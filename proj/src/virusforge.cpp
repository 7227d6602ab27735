#include "virolab/virusforge.hpp"

#include <cstddef>
#include <utility>

#include "virolab/codec.hpp"
#include "virolab/interp.hpp"
#include "virolab/lang.hpp"

namespace virolab {

const std::string kJunkOpen = "(let zn '' ";

namespace {

using lang::lit;
using lang::natlit;

// ---- composers -------------------------------------------------------------
// Both take pair(pair(v, j), x) and run the two programs in sequence on x.

const std::string kRunVirusFirst =
    "(exec (snd (fst x0)) (exec (fst (fst x0)) (snd x0)))";
const std::string kRunHostFirst =
    "(exec (fst (fst x0)) (exec (snd (fst x0)) (snd x0)))";

const std::string& composer(ConcatOrder order) {
  return order == ConcatOrder::virus_first ? kRunVirusFirst : kRunHostFirst;
}

// ---- companion / launcher runtime stubs ------------------------------------

// input pair(h, env): the program sitting h slots from the end of the
// program section. Counting from the end keeps the reference stable under
// the self-removal of the member-run convention.
const std::string kCompanionLookup =
    "(get (snd (snd x0)) (sub (arity (snd (snd x0))) (fst x0)))";

// input pair(pair(lookup, pair(h, v)), env): fetch the displaced original
// through the lookup, run v on the environment, then the original on the
// result.
const std::string kCompanionRun =
    "(let zc (fst x0) (let ze (snd x0) "
    "(exec (exec (fst zc) (pair (fst (snd zc)) ze)) (exec (snd (snd zc)) ze))))";

// input pair(pair(h, j), env): fetch the stored virus h slots from the end,
// run it, then the embedded original j on the result.
const std::string kLauncherRun =
    "(let zc (fst x0) (let ze (snd x0) "
    "(exec (snd zc) (exec (get (snd ze) (sub (arity (snd ze)) (fst zc))) ze))))";

// ---- body text builders ----------------------------------------------------
// Generated bodies only ever bind zs ze zd zp zq zc zmc zm zcp zbc zfa st zi
// (and the junk binder zn stays reserved for insert_junk).

// kleene bodies receive pair(self, env)
std::string env_scaffold(const std::string& inner) {
  return "(let zs (fst x0) (let ze (snd x0) (let zd (fst ze) (let zp (snd ze) " +
         inner + "))))";
}

// explicit-recursion bodies receive pair(e, pair(depth, env))
std::string depth_scaffold(const std::string& inner) {
  return "(let zv (fst x0) (let zy (fst (snd x0)) (let ze (snd (snd x0)) "
         "(let zd (fst ze) (let zp (snd ze) " +
         inner + ")))))";
}

// left fold over the members of tuple `src`; `step` sees the member as zi and
// the accumulator as (snd st), and yields the new accumulator
std::string fold_tuple(const std::string& src, const std::string& acc0,
                       const std::string& step) {
  return "(snd (loop st (pair '' " + acc0 + ") (sub (arity " + src +
         ") (fst st)) (pair (inc (fst st)) (let zi (get " + src +
         " (fst st)) " + step + "))))";
}

std::string map_tuple(const std::string& src, const std::string& body) {
  return fold_tuple(src, "''", "(app (snd st) " + body + ")");
}

// fold with an auxiliary slot: accumulator is pair(aux, tuple); `step` yields
// the new pair, with (fst (snd st)) the aux and (snd (snd st)) the tuple
std::string fold_aux_tuple(const std::string& src, const std::string& aux0,
                           const std::string& step) {
  return fold_tuple(src, "(pair " + aux0 + " '')", step);
}

// appends every member of tuple `src` onto the tuple expression `acc0`
std::string append_tail(const std::string& src, const std::string& acc0) {
  return fold_tuple(src, acc0, "(app (snd st) zi)");
}

// selection test around a member bound to zi
std::string pick(const SearchSpec& s, const std::string& on_match,
                 const std::string& on_keep) {
  switch (s.predicate) {
    case PredicateKind::all:
      return on_match;
    case PredicateKind::all_except_infected:
      return "(ifeq (take zi " + natlit(smn_prefix().size()) + ") " +
             lit(smn_prefix()) + " " + on_keep + " " + on_match + ")";
    case PredicateKind::prefix_match:
      return "(ifeq (take zi " + natlit(s.prefix.size()) + ") " +
             lit(s.prefix) + " " + on_match + " " + on_keep + ")";
  }
  throw InvalidBlueprint("unknown predicate");
}

// nonempty flag expression: some program equals w
std::string program_present(const Word& w) {
  return "(snd (loop st (pair '' '') (sub (arity zp) (fst st)) "
         "(pair (inc (fst st)) (ifeq (get zp (fst st)) " +
         lit(w) + " '00' (snd st)))))";
}

// imitation gate: the infected environment expression runs only when the
// condition holds, otherwise the input environment is returned untouched
std::string guard_condition(const InfectionCondition& c,
                            const std::string& infected) {
  if (c.kind != ConditionKind::requires_program) return infected;
  return "(ifeq " + program_present(c.program) + " '' ze " + infected + ")";
}

// ---- validation ------------------------------------------------------------

void require_bp(bool ok, const std::string& msg) {
  if (!ok) throw InvalidBlueprint(msg);
}

void validate_program_search(const Blueprint& bp) {
  require_bp(bp.search.target == TargetKind::programs,
             std::string(virus_class_name(bp.cls)) + ": targets must be programs");
  if (bp.search.predicate == PredicateKind::prefix_match)
    require_bp(!bp.search.prefix.empty(), "prefix_match needs a prefix");
}

void validate_condition(const Blueprint& bp) {
  if (bp.condition.kind == ConditionKind::requires_program)
    require_bp(!bp.condition.program.empty(),
               "requires_program needs the program word");
}

Word checked_tool(const Blueprint& bp, const char* what) {
  require_bp(!bp.tool.empty(),
             std::string(virus_class_name(bp.cls)) + ": blueprint needs a " + what);
  if (!lang::parses(bp.tool))
    throw SyntaxError(std::string(what) + " does not parse");
  return bp.tool;
}

Forged base(const Blueprint& normalized) {
  Forged f;
  f.cls = normalized.cls;
  f.blueprint = normalized;
  return f;
}

void record(Forged& f, std::string label, Word text) {
  f.transcript.push_back({std::move(label), std::move(text)});
}

// ---- the ten classes -------------------------------------------------------

Forged make_overwriter(Blueprint bp) {
  validate_program_search(bp);
  validate_condition(bp);
  Forged f = base(bp);
  std::string body = env_scaffold(guard_condition(
      bp.condition, "(pair zd " + map_tuple("zp", pick(bp.search, "zs", "zi")) + ")"));
  FixedPoint fp = kleene_fix(body);
  f.v = fp.e;
  f.infect_program = [v = f.v](const Word&) { return v; };
  f.equations = {"image-equals-virus", "imitation-outside-selection"};
  record(f, "body", body);
  record(f, "virus", f.v);
  return f;
}

Forged make_ecto(Blueprint bp) {
  validate_program_search(bp);
  validate_condition(bp);
  Forged f = base(bp);
  const std::string& cmp = composer(bp.order);
  std::string image = "(smn " + lit(cmp) + " (pair zs zi))";
  std::string body = env_scaffold(guard_condition(
      bp.condition, "(pair zd " + map_tuple("zp", pick(bp.search, image, "zi")) + ")"));
  FixedPoint fp = kleene_fix(body);
  f.v = fp.e;
  f.infect_program = [v = f.v, order = bp.order](const Word& j) {
    return sequence_programs(v, j, order);
  };
  f.equations = {bp.order == ConcatOrder::virus_first
                     ? "composite-runs-virus-then-host"
                     : "composite-runs-host-then-virus",
                 "host-recoverable-from-image"};
  record(f, "composer", cmp);
  record(f, "body", body);
  record(f, "virus", f.v);
  return f;
}

Forged make_duplicator(Blueprint bp) {
  validate_program_search(bp);
  validate_condition(bp);
  Forged f = base(bp);
  std::string append = fold_tuple(
      "zp", "zp", pick(bp.search, "(app (snd st) zs)", "(snd st)"));
  std::string body =
      env_scaffold(guard_condition(bp.condition, "(pair zd " + append + ")"));
  FixedPoint fp = kleene_fix(body);
  f.v = fp.e;
  f.equations = {"appends-one-copy-per-target", "hosts-unchanged"};
  record(f, "body", body);
  record(f, "virus", f.v);
  return f;
}

Forged make_document(Blueprint bp) {
  Word tool = checked_tool(bp, "renderer");
  bp.search = {TargetKind::data, PredicateKind::prefix_match, document_marker()};
  if (bp.condition.kind == ConditionKind::requires_program)
    require_bp(bp.condition.program == tool,
               "document condition must require the renderer");
  bp.condition = {ConditionKind::requires_program, tool};
  require_bp(bp.order == ConcatOrder::virus_first,
             "document infection is virus-first");
  Forged f = base(bp);
  std::string drop_marker = "(drop zi " + natlit(document_marker().size()) + ")";
  std::string image =
      "(let zq " + drop_marker + " (cat " + lit(document_marker()) +
      " (pair (ifeq (fst zq) '' zs (smn " + lit(kRunVirusFirst) +
      " (pair zs (fst zq)))) (snd zq))))";
  std::string body = env_scaffold(guard_condition(
      bp.condition, "(pair " + map_tuple("zd", pick(bp.search, image, "zi")) + " zp)"));
  FixedPoint fp = kleene_fix(body);
  f.v = fp.e;
  f.renderer = tool;
  f.infect_data = [v = f.v](const Word& w) -> Word {
    auto parts = document_parts(w);
    if (!parts) return w;
    Word script = parts->script.empty()
                      ? v
                      : sequence_programs(v, parts->script, ConcatOrder::virus_first);
    return make_document_word(script, parts->body);
  };
  f.equations = {"render-commutes-with-infection", "inactive-without-renderer"};
  record(f, "renderer", tool);
  record(f, "body", body);
  record(f, "virus", f.v);
  return f;
}

Forged make_source(Blueprint bp) {
  Word tool = checked_tool(bp, "compiler");
  bp.search = {TargetKind::data, PredicateKind::prefix_match, source_marker()};
  if (bp.condition.kind == ConditionKind::requires_program)
    require_bp(bp.condition.program == tool,
               "source condition must require the compiler");
  bp.condition = {ConditionKind::requires_program, tool};
  require_bp(bp.order == ConcatOrder::virus_first,
             "source infection is virus-first");
  Forged f = base(bp);
  std::string image = "(cat " + lit(source_marker()) + " (smn " +
                      lit(kRunVirusFirst) + " (pair zs (drop zi " +
                      natlit(source_marker().size()) + "))))";
  std::string body = env_scaffold(guard_condition(
      bp.condition, "(pair " + map_tuple("zd", pick(bp.search, image, "zi")) + " zp)"));
  FixedPoint fp = kleene_fix(body);
  f.v = fp.e;
  f.compiler = tool;
  f.infect_data = [v = f.v](const Word& w) -> Word {
    auto embedded = source_embedded(w);
    if (!embedded) return w;
    return make_source_word(
        sequence_programs(v, *embedded, ConcatOrder::virus_first));
  };
  f.equations = {"compile-then-run-commutes", "clean-compile-verbatim",
                 "inactive-without-compiler"};
  record(f, "compiler", tool);
  record(f, "body", body);
  record(f, "virus", f.v);
  return f;
}

Forged make_companion(Blueprint bp) {
  validate_program_search(bp);
  validate_condition(bp);
  Forged f = base(bp);
  // pass one: count the targets and collect their copies
  std::string count_step =
      pick(bp.search,
           "(pair (inc (fst (snd st))) (app (snd (snd st)) zi))",
           "(snd st)");
  std::string pass_copies = fold_aux_tuple("zp", "''", count_step);
  // pass two: replace each target, rank by rank; h counts from the tuple end
  // of the final layout, so the stub written for rank r gets m - r
  std::string stub =
      "(smn " + lit(kCompanionRun) + " (pair " + lit(kCompanionLookup) +
      " (pair (sub zm (fst (snd st))) zs)))";
  std::string replace_step =
      pick(bp.search,
           "(pair (inc (fst (snd st))) (app (snd (snd st)) " + stub + "))",
           "(pair (fst (snd st)) (app (snd (snd st)) zi))");
  std::string pass_replace = fold_aux_tuple("zp", "''", replace_step);
  std::string inner =
      "(let zmc " + pass_copies + " (let zm (fst zmc) (let zcp (snd zmc) "
      "(let zbc " + pass_replace + " (pair zd " +
      append_tail("zcp", "(snd zbc)") + ")))))";
  std::string body = env_scaffold(guard_condition(bp.condition, inner));
  FixedPoint fp = kleene_fix(body);
  f.v = fp.e;
  f.companion_form = [v = f.v](std::size_t h) {
    return smn(kCompanionRun,
               pair_words(kCompanionLookup, pair_words(nat_word(h), v)));
  };
  f.equations = {"originals-preserved-as-copies", "member-runs-virus-then-original",
                 "stub-omits-host-bytes"};
  record(f, "lookup", kCompanionLookup);
  record(f, "stub_runner", kCompanionRun);
  record(f, "body", body);
  record(f, "virus", f.v);
  return f;
}

Forged make_launcher(Blueprint bp) {
  validate_program_search(bp);
  validate_condition(bp);
  if (bp.condition.kind == ConditionKind::always)
    bp.condition.kind = ConditionKind::nonempty_selection;
  Forged f = base(bp);
  // the virus is appended once, always last, so every stub looks one slot
  // from the end of its own input
  std::string stub =
      "(smn " + lit(kLauncherRun) + " (pair " + natlit(1) + " zi))";
  std::string flag_step =
      pick(bp.search,
           "(pair '00' (app (snd (snd st)) " + stub + "))",
           "(pair (fst (snd st)) (app (snd (snd st)) zi))");
  std::string pass = fold_aux_tuple("zp", "''", flag_step);
  std::string inner =
      "(let zfa " + pass +
      " (pair zd (ifeq (fst zfa) '' (snd zfa) (app (snd zfa) zs))))";
  std::string body = env_scaffold(guard_condition(bp.condition, inner));
  FixedPoint fp = kleene_fix(body);
  f.v = fp.e;
  f.infect_program = [](const Word& j) {
    return smn(kLauncherRun, pair_words(nat_word(1), j));
  };
  f.equations = {"virus-stored-verbatim", "stub-launches-virus-then-host",
                 "idempotent-on-infected"};
  record(f, "stub_runner", kLauncherRun);
  record(f, "body", body);
  record(f, "virus", f.v);
  return f;
}

Forged make_multipartite(Blueprint bp) {
  require_bp(bp.parts.size() == 2,
             "multipartite needs a program part and a document part");
  Blueprint prog = bp.parts[0];
  Blueprint doc = bp.parts[1];
  require_bp(prog.cls == VirusClass::ecto_symbiote,
             "multipartite program part must be an ecto_symbiote blueprint");
  require_bp(doc.cls == VirusClass::document,
             "multipartite document part must be a document blueprint");
  validate_program_search(prog);
  require_bp(prog.condition.kind == ConditionKind::always,
             "multipartite program part condition must be always");
  Word tool = checked_tool(doc, "renderer");
  doc.search = {TargetKind::data, PredicateKind::prefix_match, document_marker()};
  doc.condition = {ConditionKind::requires_program, tool};
  require_bp(bp.condition.kind == ConditionKind::always,
             "multipartite condition must be always");
  bp.parts = {prog, doc};
  Forged f = base(bp);

  const std::string& cmp = composer(prog.order);
  std::string prog_image = "(smn " + lit(cmp) + " (pair zs zi))";
  std::string prog_section = map_tuple("zp", pick(prog.search, prog_image, "zi"));

  std::string drop_marker = "(drop zi " + natlit(document_marker().size()) + ")";
  std::string doc_image =
      "(let zq " + drop_marker + " (cat " + lit(document_marker()) +
      " (pair (ifeq (fst zq) '' zs (smn " + lit(kRunVirusFirst) +
      " (pair zs (fst zq)))) (snd zq))))";
  std::string doc_section =
      "(ifeq " + program_present(tool) + " '' zd " +
      map_tuple("zd", pick(doc.search, doc_image, "zi")) + ")";

  std::string body =
      env_scaffold("(pair " + doc_section + " " + prog_section + ")");
  FixedPoint fp = kleene_fix(body);
  f.v = fp.e;
  f.renderer = tool;
  f.infect_program = [v = f.v, order = prog.order](const Word& j) {
    return sequence_programs(v, j, order);
  };
  f.infect_data = [v = f.v](const Word& w) -> Word {
    auto parts = document_parts(w);
    if (!parts) return w;
    Word script = parts->script.empty()
                      ? v
                      : sequence_programs(v, parts->script, ConcatOrder::virus_first);
    return make_document_word(script, parts->body);
  };
  f.equations = {"program-part-matches-ecto", "document-part-matches-document",
                 "single-pass-both-sections"};
  record(f, "renderer", tool);
  record(f, "body", body);
  record(f, "virus", f.v);
  return f;
}

Forged make_generation_counter(Blueprint bp) {
  validate_program_search(bp);
  validate_condition(bp);
  Forged f = base(bp);
  std::string inner =
      "(let zq (exec zv (inc zy)) (pair zd " +
      map_tuple("zp", pick(bp.search, "zq", "zi")) + "))";
  std::string body = depth_scaffold(guard_condition(bp.condition, inner));
  ExplicitFix ef = explicit_fix(body);
  f.v = ef.apply(nat_word(0));
  f.phi = [ef](const Word& y) { return ef.apply(y); };
  f.equations = {"image-is-next-depth", "depth-word-recoverable"};
  record(f, "body", body);
  record(f, "generator", ef.e);
  record(f, "virus", f.v);
  return f;
}

Forged make_polymorphic(Blueprint bp) {
  validate_program_search(bp);
  validate_condition(bp);
  require_bp(bp.transform.empty() || bp.transform == "noop_insertion",
             "polymorphic transform must be noop_insertion");
  bp.transform = "noop_insertion";
  Forged f = base(bp);
  // Pad: given a seed, emit the seed's padded specialization; running the
  // padded form re-enters Pad on the junk-wrapped seed, so every generation
  // differs in spelling while the junk wrapper keeps behavior fixed.
  std::string wrap_seed =
      "(cat " + lit(kJunkOpen) + " (cat zy " + lit(Word(")")) + "))";
  std::string pad_inner =
      "(let zq (exec zv " + wrap_seed + ") (pair zd " +
      map_tuple("zp", pick(bp.search, "zq", "zi")) + "))";
  std::string pad_body = depth_scaffold(guard_condition(bp.condition, pad_inner));
  ExplicitFix ef = explicit_fix(pad_body);
  f.code_pad = ef.e;
  f.pad = [ef](const Word& y) { return ef.apply(y); };
  f.tau = [](const Word& w) { return insert_junk(w); };
  // the virus proper: replaces its targets with Pad of its own text
  std::string v_inner =
      "(let zq (exec " + lit(f.code_pad) + " zs) (pair zd " +
      map_tuple("zp", pick(bp.search, "zq", "zi")) + "))";
  std::string v_body = env_scaffold(guard_condition(bp.condition, v_inner));
  FixedPoint fp = kleene_fix(v_body);
  f.v = fp.e;
  Word padded = ef.apply(f.v);
  f.infect_program = [padded](const Word&) { return padded; };
  f.phi = [ef](const Word& y) { return ef.apply(y); };
  f.equations = {"pad-equation", "junk-wrapper-equivalence",
                 "generations-distinct", "generations-equivalent-modulo-junk"};
  record(f, "pad_body", pad_body);
  record(f, "code_pad", f.code_pad);
  record(f, "body", v_body);
  record(f, "virus", f.v);
  return f;
}

}  // namespace

const char* virus_class_name(VirusClass cls) {
  switch (cls) {
    case VirusClass::overwriter: return "overwriter";
    case VirusClass::ecto_symbiote: return "ecto_symbiote";
    case VirusClass::duplicator: return "duplicator";
    case VirusClass::document: return "document";
    case VirusClass::source: return "source";
    case VirusClass::companion: return "companion";
    case VirusClass::launcher: return "launcher";
    case VirusClass::multipartite: return "multipartite";
    case VirusClass::generation_counter: return "generation_counter";
    case VirusClass::polymorphic: return "polymorphic";
  }
  return "unknown";
}

std::optional<VirusClass> virus_class_from_name(const std::string& name) {
  static const std::pair<const char*, VirusClass> table[] = {
      {"overwriter", VirusClass::overwriter},
      {"ecto_symbiote", VirusClass::ecto_symbiote},
      {"duplicator", VirusClass::duplicator},
      {"document", VirusClass::document},
      {"source", VirusClass::source},
      {"companion", VirusClass::companion},
      {"launcher", VirusClass::launcher},
      {"multipartite", VirusClass::multipartite},
      {"generation_counter", VirusClass::generation_counter},
      {"polymorphic", VirusClass::polymorphic},
  };
  for (const auto& [n, c] : table)
    if (name == n) return c;
  return {};
}

Forged forge(const Blueprint& bp) {
  switch (bp.cls) {
    case VirusClass::overwriter: return make_overwriter(bp);
    case VirusClass::ecto_symbiote: return make_ecto(bp);
    case VirusClass::duplicator: return make_duplicator(bp);
    case VirusClass::document: return make_document(bp);
    case VirusClass::source: return make_source(bp);
    case VirusClass::companion: return make_companion(bp);
    case VirusClass::launcher: return make_launcher(bp);
    case VirusClass::multipartite: return make_multipartite(bp);
    case VirusClass::generation_counter: return make_generation_counter(bp);
    case VirusClass::polymorphic: return make_polymorphic(bp);
  }
  throw InvalidBlueprint("unknown class");
}

Word sequence_programs(const Word& v, const Word& j, ConcatOrder order) {
  return smn(composer(order), pair_words(v, j));
}

std::optional<SequencedParts> sequenced_parts(const Word& w) {
  auto parts = smn_parts(w);
  if (!parts) return {};
  ConcatOrder order;
  if (parts->first == kRunVirusFirst) {
    order = ConcatOrder::virus_first;
  } else if (parts->first == kRunHostFirst) {
    order = ConcatOrder::host_first;
  } else {
    return {};
  }
  auto [v, j] = unpair_word(parts->second);
  return SequencedParts{std::move(v), std::move(j), order};
}

const Word& document_marker() {
  static const Word m = "#DOC";
  return m;
}

const Word& source_marker() {
  static const Word m = "#SRC";
  return m;
}

Word make_document_word(const Word& script, const Word& body) {
  return document_marker() + pair_words(script, body);
}

std::optional<DocumentParts> document_parts(const Word& w) {
  const Word& m = document_marker();
  if (w.size() < m.size() || w.compare(0, m.size(), m) != 0) return {};
  auto [script, body] = unpair_word(w.substr(m.size()));
  return DocumentParts{std::move(script), std::move(body)};
}

const Word& make_doc_renderer() {
  static const Word r =
      "(let zq (drop (fst x0) " + natlit(document_marker().size()) +
      ") (pair (snd zq) (ifeq (fst zq) '' (snd x0) (exec (fst zq) (snd x0)))))";
  return r;
}

Word make_source_word(const Word& program) {
  return source_marker() + program;
}

std::optional<Word> source_embedded(const Word& w) {
  const Word& m = source_marker();
  if (w.size() < m.size() || w.compare(0, m.size(), m) != 0) return {};
  return w.substr(m.size());
}

const Word& make_source_compiler() {
  static const Word c = "(drop x0 " + natlit(source_marker().size()) + ")";
  return c;
}

Word insert_junk(const Word& w) { return kJunkOpen + w + ")"; }

Word strip_junk(const Word& w) {
  Word cur = w;
  while (cur.size() > kJunkOpen.size() &&
         cur.compare(0, kJunkOpen.size(), kJunkOpen) == 0 && cur.back() == ')') {
    cur = cur.substr(kJunkOpen.size(), cur.size() - kJunkOpen.size() - 1);
  }
  return cur;
}

Word junk_normal_form(const Word& w) {
  Word cur = strip_junk(w);
  if (auto parts = smn_parts(cur))
    return smn(junk_normal_form(parts->first), junk_normal_form(parts->second));
  return cur;
}

}  // namespace virolab
