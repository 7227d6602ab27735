#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "virolab/recursion.hpp"
#include "virolab/word.hpp"

namespace virolab {

enum class VirusClass {
  overwriter,
  ecto_symbiote,
  duplicator,
  document,
  source,
  companion,
  launcher,
  multipartite,
  generation_counter,
  polymorphic,
};

[[nodiscard]] const char* virus_class_name(VirusClass cls);
[[nodiscard]] std::optional<VirusClass> virus_class_from_name(const std::string& name);

enum class TargetKind { programs, data };
enum class PredicateKind { all, all_except_infected, prefix_match };

// Which members of the environment the virus selects as hosts.
struct SearchSpec {
  TargetKind target = TargetKind::programs;
  PredicateKind predicate = PredicateKind::all_except_infected;
  Word prefix;  // prefix_match only
};

enum class ConditionKind { always, nonempty_selection, requires_program };

// Gate on the whole infection step; when it fails the run returns the
// environment unchanged.
struct InfectionCondition {
  ConditionKind kind = ConditionKind::always;
  Word program;  // requires_program: this exact word must be present among programs
};

enum class ConcatOrder { virus_first, host_first };

struct Blueprint {
  VirusClass cls = VirusClass::overwriter;
  SearchSpec search;
  InfectionCondition condition;
  ConcatOrder order = ConcatOrder::virus_first;
  Word tool;               // document renderer / source compiler
  std::string transform;   // polymorphic: "noop_insertion"
  std::vector<Blueprint> parts;  // multipartite: program part, then document part
};

struct InvalidBlueprint : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A forged virus plus the host-side derivations the verifier replays.
// Only the members that make sense for the class are set; the rest stay
// empty / null.
struct Forged {
  VirusClass cls = VirusClass::overwriter;
  Blueprint blueprint;                    // normalized form actually used
  Word v;                                 // the virus itself
  std::vector<std::string> equations;     // checkable equation identifiers
  std::vector<TranscriptStep> transcript;

  // host-side image of a program host under infection
  std::function<Word(const Word&)> infect_program;
  // host-side image of a data host (document / source)
  std::function<Word(const Word&)> infect_data;
  // companion: stub for a copy sitting h slots from the tuple end
  std::function<Word(std::size_t)> companion_form;
  // generation counter / polymorphic: y -> specialized form
  std::function<Word(const Word&)> phi;

  Word renderer;   // document
  Word compiler;   // source
  Word code_pad;   // polymorphic: the program computing Pad
  // polymorphic host-side maps
  std::function<Word(const Word&)> pad;
  std::function<Word(const Word&)> tau;
};

// Validates, normalizes and builds. Throws InvalidBlueprint on contradictory
// or incomplete blueprints, SyntaxError if a supplied tool does not parse.
[[nodiscard]] Forged forge(const Blueprint& bp);

// Sequencing combinator: a single program that runs both parts on an
// environment word. virus_first runs `v` first, then `j` on the result.
[[nodiscard]] Word sequence_programs(const Word& v, const Word& j, ConcatOrder order);
// Recovers (v, j) from a word built by sequence_programs, along with the order.
struct SequencedParts {
  Word v;
  Word j;
  ConcatOrder order;
};
[[nodiscard]] std::optional<SequencedParts> sequenced_parts(const Word& w);

// Document data words: marker, then the script/body pair.
[[nodiscard]] Word make_document_word(const Word& script, const Word& body);
struct DocumentParts {
  Word script;
  Word body;
};
[[nodiscard]] std::optional<DocumentParts> document_parts(const Word& w);
// Renderer: input pair(document, env word), output pair(body, env word after
// running the script; the env unchanged when the script slot is empty).
[[nodiscard]] const Word& make_doc_renderer();

// Source data words: marker, then the program bytes verbatim.
[[nodiscard]] Word make_source_word(const Word& program);
[[nodiscard]] std::optional<Word> source_embedded(const Word& w);
// Compiler: input the source word, output the embedded program.
[[nodiscard]] const Word& make_source_compiler();

[[nodiscard]] const Word& document_marker();  // "#DOC"
[[nodiscard]] const Word& source_marker();    // "#SRC"

// Polymorphic junk transformer: wraps a program in one behavior-preserving
// no-op binding. strip_junk peels such wrappers off the top;
// junk_normal_form additionally normalizes through specialization constants,
// so every member of a padding orbit maps to the same word.
[[nodiscard]] Word insert_junk(const Word& w);
[[nodiscard]] Word strip_junk(const Word& w);
[[nodiscard]] Word junk_normal_form(const Word& w);

}  // namespace virolab
