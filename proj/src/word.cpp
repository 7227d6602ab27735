#include "virolab/word.hpp"

#include <stdexcept>

namespace virolab {

namespace {
constexpr char kDigits[] = "0123456789abcdef";

int digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}
}  // namespace

std::string to_hex(const Word& w) {
  std::string out;
  out.reserve(w.size() * 2);
  for (unsigned char b : w) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Word from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex: odd length");
  Word out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = digit_value(hex[i]);
    int lo = digit_value(hex[i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("hex: bad digit");
    out.push_back(static_cast<char>((hi << 4) | lo));
  }
  return out;
}

}  // namespace virolab
