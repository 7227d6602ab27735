#pragma once

#include <cstdint>
#include <string>

namespace virolab {

// Every value in the system is a Word: a finite, possibly empty byte string.
// Programs, numbers, tuples and whole environments are all Words under the
// encodings in codec.hpp.
using Word = std::string;

// First byte of a data file. The grammar has no token containing this byte,
// so a word starting with it can never parse as a program.
inline constexpr char kDataMarker = '\x23';

[[nodiscard]] inline bool is_data_word(const Word& w) {
  return !w.empty() && w[0] == kDataMarker;
}

// Lowercase hex, two digits per byte. This is the on-disk spelling of every
// Word in the JSON formats.
[[nodiscard]] std::string to_hex(const Word& w);

// Strict inverse: even length, lowercase digits only. Throws
// std::invalid_argument otherwise.
[[nodiscard]] Word from_hex(const std::string& hex);

}  // namespace virolab
