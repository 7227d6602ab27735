#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "virolab/interp.hpp"
#include "virolab/word.hpp"

// Virtual system environments: an ordered shelf of data files and program
// files. Data files carry the marker byte up front, so they can never be
// mistaken for (or run as) programs.

namespace virolab {

struct Env {
  std::vector<Word> data;      // each begins with kDataMarker
  std::vector<Word> programs;  // arbitrary words; parsing is their problem

  bool operator==(const Env&) const = default;
};

struct MalformedEnvResult : std::runtime_error {
  explicit MalformedEnvResult(const std::string& what) : std::runtime_error(what) {}
};

// pair(tuple(data), tuple(programs)); the empty environment is the empty word.
[[nodiscard]] Word encode_env(const Env& env);
[[nodiscard]] Env decode_env(const Word& w);  // throws MalformedEnvResult
[[nodiscard]] bool well_formed_env(const Env& env);

enum class Section : std::uint8_t { data, programs };
[[nodiscard]] const char* section_name(Section s);

// Positional differences between two environments, per section: index-wise
// replacements, then additions past the shorter tail, then removals.
struct EnvDelta {
  struct Replaced {
    Section section;
    std::size_t index;
    Word before;
    Word after;
    bool operator==(const Replaced&) const = default;
  };
  struct Added {
    Section section;
    std::size_t index;
    Word word;
    bool operator==(const Added&) const = default;
  };
  struct Removed {
    Section section;
    std::size_t index;
    Word before;
    bool operator==(const Removed&) const = default;
  };

  std::vector<Replaced> replaced;
  std::vector<Added> added;
  std::vector<Removed> removed;

  [[nodiscard]] bool empty() const {
    return replaced.empty() && added.empty() && removed.empty();
  }
  bool operator==(const EnvDelta&) const = default;
};

[[nodiscard]] EnvDelta diff_envs(const Env& before, const Env& after);
[[nodiscard]] Env apply_delta(const Env& before, const EnvDelta& delta);

// Outcome of running a program against an environment. `raw` keeps the
// program's literal output word for the env and malformed kinds.
struct RunResult {
  enum class Kind { env, undefined, out_of_fuel, malformed };
  Kind kind = Kind::undefined;
  Env env;
  Word raw;
  std::string reason;
  std::uint64_t consumed = 0;

  [[nodiscard]] bool ok() const { return kind == Kind::env; }
};

// A free program (a virus not yet resident) sees the whole environment.
[[nodiscard]] RunResult run_external(const Word& v, const Env& env, Fuel fuel);

// A resident program sees the environment with itself removed; its own slot
// is not part of its input. Throws IndexOutOfRange for a bad index.
[[nodiscard]] RunResult run_member(const Env& env, std::size_t i, Fuel fuel);

// The input run_member hands to programs[i].
[[nodiscard]] Env env_without_program(const Env& env, std::size_t i);

}  // namespace virolab
