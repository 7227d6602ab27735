#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "virolab/word.hpp"

// Constructive self-reference. Every builder here returns a program that can
// name itself, made from one move repeated: specialize a frame with its own
// text. Multi-slot bodies receive nested pairs (see triple_word), which is
// exactly the shape repeated specialization produces.

namespace virolab {

struct SyntaxError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TranscriptStep {
  std::string label;
  Word text;
};

struct FixedPoint {
  Word e;
  std::vector<TranscriptStep> transcript;
};

// Returns e with interp(e, x) ~ interp(code_f, pair(e, x)) for all x: the two
// sides agree in kind and value whenever neither runs out of fuel. code_f sees
// its caller's own text as the first slot. Output size is 6|code_f| + 169.
// Throws SyntaxError if code_f does not parse.
[[nodiscard]] FixedPoint kleene_fix(const Word& code_f);

// Returns (e1, e2) with
//   interp(e1, x) ~ interp(code_f, triple(e1, e2, x))
//   interp(e2, x) ~ interp(code_g, triple(e1, e2, x)).
// Built by nesting kleene_fix: e2 is a function of e1, and e1's body rebuilds
// e2's text in-language, byte for byte, before consulting code_f.
[[nodiscard]] std::pair<FixedPoint, FixedPoint> double_fix(const Word& code_f,
                                                           const Word& code_g);

// A program e computing a total map y -> q_y over all words, with
//   interp(q_y, x) ~ interp(code_f, triple(e, y, x)).
// apply(y) builds q_y host-side; it is bit-identical to interp(e, y).value.
// The y slot sits in q_y's outermost constant, so an emitted program carries
// its own parameter readably.
struct ExplicitFix {
  Word e;
  Word specialized;  // code_f with the self slot already fixed
  std::vector<TranscriptStep> transcript;

  [[nodiscard]] Word apply(const Word& y) const;
};

[[nodiscard]] ExplicitFix explicit_fix(const Word& code_f);

}  // namespace virolab
