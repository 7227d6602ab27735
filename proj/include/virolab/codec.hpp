#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "virolab/word.hpp"

// Bijective numeral bridge and pairing.
//
// Words are read as naturals in bijective base 256 (digit values 1..256,
// least significant byte first), so "" = 0, "\x00" = 1, "\x00\x00" = 257 and
// every natural names exactly one word. On top of that sits the Cantor pair
// pi(x,y) = (x+y)(x+y+1)/2 + y, which is a bijection N^2 -> N, and a tuple
// layer with an in-band arity header. Arithmetic is exact via GMP; word sizes
// roughly double per pairing level, which is fine at the scales the lab runs.

namespace virolab {

struct MalformedTuple : std::runtime_error {
  explicit MalformedTuple(const std::string& what) : std::runtime_error(what) {}
};

struct IndexOutOfRange : std::out_of_range {
  explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

// Decoding refuses arity headers above this; nothing in the lab comes close.
inline constexpr std::size_t kMaxTupleArity = 1u << 20;

[[nodiscard]] mpz_class word_to_nat(const Word& w);
[[nodiscard]] Word nat_to_word(const mpz_class& n);

// Shorthand for small naturals (indices, arities, generation depths).
[[nodiscard]] Word nat_word(std::uint64_t n);
// Inverse for words expected to hold a small natural; throws IndexOutOfRange
// if the value does not fit.
[[nodiscard]] std::uint64_t word_small_nat(const Word& w);

[[nodiscard]] Word pair_words(const Word& a, const Word& b);
[[nodiscard]] std::pair<Word, Word> unpair_word(const Word& w);

// Three-slot convention used by the recursion layer: nested pairs, not the
// arity-headed tuple, because that is the shape repeated specialization
// produces on its own.
[[nodiscard]] inline Word triple_word(const Word& a, const Word& b, const Word& c) {
  return pair_words(a, pair_words(b, c));
}

// encode_tuple(x1..xk) = pair(k, x1 . (x2 . (... (xk . k)))) with the arity
// repeated as the fold terminal. The duplicate is what makes a forged or
// hand-edited arity header detectable: after k unpairs the residue must spell
// k again.
[[nodiscard]] Word encode_tuple(const std::vector<Word>& items);
[[nodiscard]] std::vector<Word> decode_tuple(const Word& w);  // throws MalformedTuple
[[nodiscard]] bool is_tuple_word(const Word& w);

[[nodiscard]] std::size_t tuple_arity(const Word& w);           // throws MalformedTuple
[[nodiscard]] Word tuple_get(const Word& w, std::size_t i);     // throws IndexOutOfRange
// Replace items at the given (index, word) positions; identity mapping is the
// identity on the tuple word.
[[nodiscard]] Word replace_items(const Word& w,
                                 const std::vector<std::pair<std::size_t, Word>>& repl);
// Append items at the end, preserving existing order.
[[nodiscard]] Word add_items(const Word& w, const std::vector<Word>& items);

}  // namespace virolab
