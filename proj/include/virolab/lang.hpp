#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "virolab/word.hpp"

// The lab's program notation. A program is a Word whose bytes spell one
// expression over a fixed form set; the single input is in scope as `x0`.
//
//   expr  := 'hex'                      byte-string literal, lowercase hex
//          | name                       bound variable
//          | (let name expr expr)       bind, then evaluate body
//          | (ifeq e1 e2 then else)     branch on byte equality
//          | (loop name init guard body)
//          |                            rebind name from init; while guard is
//          |                            non-empty, rebind name from body
//          | (exec p v)                 run p as a program on input v
//          | (pair a b) (fst w) (snd w)
//          | (tup e...) (arity t) (get t i) (set t i x) (app t x)
//          | (cat a b) (take w n) (drop w n)
//          | (inc n) (sub a b)
//          | (smn p c)                  specialize p's input to pair(c, .)
//          | (quo w)                    literal-token spelling of w
//
// Whitespace is free between tokens; the token alphabet never contains the
// data marker byte, so no data file parses. Keywords are reserved and cannot
// be binder names.

namespace virolab::lang {

enum class Op : std::uint8_t {
  lit, var, let, ifeq, loop, exec, pair, fst, snd, tup,
  arity, get, set, app, cat, take, drop, inc, sub, smn, quo,
};

struct Node {
  Op op;
  Word bytes;                       // Op::lit payload
  std::string name;                 // var reference or let/loop binder
  std::vector<std::uint32_t> kids;  // operand node indices
};

struct Program {
  std::vector<Node> nodes;
  std::uint32_t root = 0;
};

struct ParseError {
  std::size_t pos = 0;
  std::string reason;
};

struct ParseResult {
  std::shared_ptr<const Program> program;  // null on failure
  ParseError error;
  explicit operator bool() const { return program != nullptr; }
};

[[nodiscard]] ParseResult parse(const Word& src);
[[nodiscard]] bool parses(const Word& src);

// Memoized parse for the interpreter's exec path; returns null on failure.
[[nodiscard]] std::shared_ptr<const Program> parse_cached(const Word& src);

// ---- canonical source construction ----------------------------------------
// All generated programs are emitted through these, so a given construction
// always yields the same bytes.

[[nodiscard]] std::string lit(const Word& w);           // 'hex'
[[nodiscard]] std::string natlit(std::uint64_t n);      // lit(nat_word(n))
[[nodiscard]] std::string sx(const std::vector<std::string>& parts);

// The entry variable every program receives its input through.
inline constexpr const char* kInput = "x0";

}  // namespace virolab::lang
