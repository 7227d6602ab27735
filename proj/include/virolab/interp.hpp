#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "virolab/word.hpp"

// Fuel-metered evaluation. interp(p, x, fuel) is the lab's phi: partiality is
// made observable by the fuel budget, runtime faults collapse to Undefined,
// and nested exec draws from the same budget as its caller.

namespace virolab {

struct Fuel {
  std::uint64_t budget = 10'000'000;
};

struct EvalOutcome {
  enum class Kind { value, undefined, out_of_fuel };
  Kind kind = Kind::undefined;
  Word value;           // Kind::value only
  std::string reason;   // Kind::undefined only
  std::uint64_t consumed = 0;

  [[nodiscard]] bool is_value() const { return kind == Kind::value; }
  [[nodiscard]] bool is_undefined() const { return kind == Kind::undefined; }
  [[nodiscard]] bool out_of_fuel() const { return kind == Kind::out_of_fuel; }

  bool operator==(const EvalOutcome&) const = default;

  static EvalOutcome val(Word w, std::uint64_t consumed) {
    return {Kind::value, std::move(w), {}, consumed};
  }
  static EvalOutcome undef(std::string why, std::uint64_t consumed) {
    return {Kind::undefined, {}, std::move(why), consumed};
  }
  static EvalOutcome exhausted(std::uint64_t consumed) {
    return {Kind::out_of_fuel, {}, {}, consumed};
  }
};

[[nodiscard]] EvalOutcome interp(const Word& program, const Word& input, Fuel fuel);

// Syntactic specialization: the result runs `p` with its input rebound to
// pair(c, input). Pure text surgery, defined on arbitrary bytes; if p does
// not parse, the result does not either, so it computes the nowhere-defined
// function just as p does. Size grows by |p| + 2|c| + O(1) (literals are
// spelled in hex).
[[nodiscard]] Word smn(const Word& p, const Word& c);

// Every smn output (and thus every fixed point built on it) starts with these
// bytes; nothing else the lab emits does. Selection predicates use it to
// recognize already-processed programs.
[[nodiscard]] const Word& smn_prefix();

// Exact inverse of smn: recovers (p, c) when w is byte-identical to some
// smn(p, c), nothing otherwise (the reconstruction is re-checked).
[[nodiscard]] std::optional<std::pair<Word, Word>> smn_parts(const Word& w);

}  // namespace virolab
