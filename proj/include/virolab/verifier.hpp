#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "virolab/envmodel.hpp"
#include "virolab/interp.hpp"
#include "virolab/virusforge.hpp"
#include "virolab/word.hpp"

namespace virolab {

enum class Verdict { equal, unequal, inconclusive };

// one side of an equation on one probe, reduced to what a report needs
struct SideResult {
  bool defined = false;
  bool exhausted = false;
  Word word;  // defined only
};

struct ProbeVerdict {
  std::size_t probe = 0;
  Verdict verdict = Verdict::equal;
  Env witness;          // unequal only
  SideResult lhs, rhs;  // unequal / inconclusive only
};

struct EquationCheck {
  std::string id;
  std::vector<ProbeVerdict> verdicts;
  bool pass = false;  // all equal, none inconclusive
  [[nodiscard]] bool inconclusive() const;
};

// Extensional equality is only checkable on samples: both sides run on every
// probe, fuel starvation stays visible as inconclusive and never converts to
// a verdict either way. Two undefined outcomes agree (both sides diverge).
using EquationSide = std::function<EvalOutcome(const Env&, Fuel)>;

[[nodiscard]] EquationCheck check_equation(std::string id, const EquationSide& lhs,
                                           const EquationSide& rhs,
                                           const std::vector<Env>& probes, Fuel fuel);

struct ClassReport {
  VirusClass cls = VirusClass::overwriter;
  std::vector<EquationCheck> equations;
  bool pass = false;
  [[nodiscard]] bool inconclusive() const;
};

// Replays every declared class equation on the probe corpus. Probes that
// lack the ingredients an equation talks about (a host program, a marked
// data word, the consumer tool) count as vacuously equal; the standard
// corpus keeps that from hollowing the checks out. Where an equation speaks
// about "the host", the host of record is the first program of the probe.
[[nodiscard]] ClassReport verify_class(const Forged& f, const std::vector<Env>& probes,
                                       Fuel fuel);

// Host-side model of one infection step, built from the forged artifact.
// The defining whole-environment equations compare the actual run against
// this word for word.
[[nodiscard]] Env expected_infection(const Forged& f, const Env& e);

// The counterexample separating "viral program" from "infected form": an
// ecto-symbiote v extensionally differs from the infected form of a
// deleting host, while the infected form of an identity host matches v
// exactly. Reproduced for environments of 1..4 programs.
struct BonfanteCase {
  std::size_t n = 0;            // programs in the starting environment
  Word infected_env_word;       // run_external(v, env)
  Word deleting_member_word;    // run_member of the infected deleting host
  bool deleting_unequal = false;
  bool identity_equal = false;
};
struct BonfanteReport {
  Word v;
  std::vector<BonfanteCase> cases;
  bool pass = false;
};
[[nodiscard]] BonfanteReport bonfante_demo(Fuel fuel = Fuel{});

enum class TargetType { program, data, new_file };
enum class HostModification {
  destructive,
  preservative,
  partially_destructive,
  not_applicable,
};
[[nodiscard]] const char* target_type_name(TargetType t);
[[nodiscard]] const char* host_modification_name(HostModification m);

struct TraitReport {
  TargetType target_type = TargetType::program;
  HostModification host_modification = HostModification::not_applicable;
  std::size_t spread_count = 0;
};

struct InsufficientProbes : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Classifies purely from observed runs on the probes: which section the
// changes land in, how many elements one host infection touches (measured
// on the probe with the fewest positive changes, i.e. a single-host
// layout), and whether host behavior survives. Preservation of a replaced
// program is judged by the member-run convention against host-after-virus;
// preservation of replaced data is judged through the lab's canonical
// renderer/compiler when the probe carries them. Throws InsufficientProbes
// when the corpus never triggers the virus, lacks the layouts above, or
// fuel runs out mid-probe.
[[nodiscard]] TraitReport classify_traits(const Word& v, const std::vector<Env>& probes,
                                          Fuel fuel);

// Deterministic probe corpus: a fixed prefix of distinctive layouts (single
// host, document+renderer, source+compiler, hostile host pairs, empty
// sections), then seed-derived variations.
[[nodiscard]] std::vector<Env> probe_corpus(std::size_t count, std::uint64_t seed);

// junk_normal_form over every program of an environment
[[nodiscard]] Env junk_normal_env(const Env& e);

}  // namespace virolab
