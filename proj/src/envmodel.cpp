#include "virolab/envmodel.hpp"

#include <algorithm>

#include "virolab/codec.hpp"

namespace virolab {

Word encode_env(const Env& env) {
  return pair_words(encode_tuple(env.data), encode_tuple(env.programs));
}

bool well_formed_env(const Env& env) {
  for (const Word& d : env.data) {
    if (!is_data_word(d)) return false;
  }
  return true;
}

Env decode_env(const Word& w) {
  auto [dw, pw] = unpair_word(w);
  Env env;
  try {
    env.data = decode_tuple(dw);
    env.programs = decode_tuple(pw);
  } catch (const MalformedTuple& e) {
    throw MalformedEnvResult(std::string("not an environment: ") + e.what());
  }
  for (const Word& d : env.data) {
    if (!is_data_word(d)) {
      throw MalformedEnvResult("data file missing the marker byte");
    }
  }
  return env;
}

const char* section_name(Section s) {
  return s == Section::data ? "data" : "programs";
}

namespace {

void diff_section(Section s, const std::vector<Word>& before,
                  const std::vector<Word>& after, EnvDelta& out) {
  std::size_t common = std::min(before.size(), after.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (before[i] != after[i]) out.replaced.push_back({s, i, before[i], after[i]});
  }
  for (std::size_t i = common; i < after.size(); ++i) {
    out.added.push_back({s, i, after[i]});
  }
  for (std::size_t i = common; i < before.size(); ++i) {
    out.removed.push_back({s, i, before[i]});
  }
}

std::vector<Word>& section_of(Env& env, Section s) {
  return s == Section::data ? env.data : env.programs;
}

}  // namespace

EnvDelta diff_envs(const Env& before, const Env& after) {
  EnvDelta delta;
  diff_section(Section::data, before.data, after.data, delta);
  diff_section(Section::programs, before.programs, after.programs, delta);
  return delta;
}

Env apply_delta(const Env& before, const EnvDelta& delta) {
  Env env = before;
  for (const auto& r : delta.removed) {
    auto& sec = section_of(env, r.section);
    if (r.index < sec.size()) sec.resize(r.index);
  }
  for (const auto& r : delta.replaced) {
    section_of(env, r.section)[r.index] = r.after;
  }
  for (const auto& a : delta.added) {
    auto& sec = section_of(env, a.section);
    sec.resize(std::max(sec.size(), a.index + 1));
    sec[a.index] = a.word;
  }
  return env;
}

namespace {

RunResult outcome_to_result(EvalOutcome&& r) {
  RunResult out;
  out.consumed = r.consumed;
  switch (r.kind) {
    case EvalOutcome::Kind::out_of_fuel:
      out.kind = RunResult::Kind::out_of_fuel;
      return out;
    case EvalOutcome::Kind::undefined:
      out.kind = RunResult::Kind::undefined;
      out.reason = std::move(r.reason);
      return out;
    case EvalOutcome::Kind::value:
      break;
  }
  out.raw = std::move(r.value);
  try {
    out.env = decode_env(out.raw);
    out.kind = RunResult::Kind::env;
  } catch (const MalformedEnvResult& e) {
    out.kind = RunResult::Kind::malformed;
    out.reason = e.what();
  }
  return out;
}

}  // namespace

RunResult run_external(const Word& v, const Env& env, Fuel fuel) {
  return outcome_to_result(interp(v, encode_env(env), fuel));
}

Env env_without_program(const Env& env, std::size_t i) {
  if (i >= env.programs.size()) {
    throw IndexOutOfRange("no program at index " + std::to_string(i));
  }
  Env rest = env;
  rest.programs.erase(rest.programs.begin() + static_cast<std::ptrdiff_t>(i));
  return rest;
}

RunResult run_member(const Env& env, std::size_t i, Fuel fuel) {
  Env rest = env_without_program(env, i);
  return outcome_to_result(interp(env.programs[i], encode_env(rest), fuel));
}

}  // namespace virolab
