#include "virolab/verifier.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <utility>

#include "virolab/codec.hpp"

namespace virolab {

namespace {

bool selects(const SearchSpec& s, const Word& w) {
  switch (s.predicate) {
    case PredicateKind::all:
      return true;
    case PredicateKind::all_except_infected: {
      const Word& p = smn_prefix();
      return w.size() < p.size() || w.compare(0, p.size(), p) != 0;
    }
    case PredicateKind::prefix_match:
      return w.size() >= s.prefix.size() &&
             w.compare(0, s.prefix.size(), s.prefix) == 0;
  }
  return false;
}

std::vector<std::size_t> selected_indices(const SearchSpec& s,
                                          const std::vector<Word>& section) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < section.size(); ++i)
    if (selects(s, section[i])) out.push_back(i);
  return out;
}

bool contains_program(const Env& e, const Word& p) {
  return std::find(e.programs.begin(), e.programs.end(), p) != e.programs.end();
}

bool condition_holds(const InfectionCondition& c, const Env& e, const SearchSpec& s) {
  switch (c.kind) {
    case ConditionKind::always:
      return true;
    case ConditionKind::nonempty_selection: {
      const auto& sec = s.target == TargetKind::programs ? e.programs : e.data;
      return std::any_of(sec.begin(), sec.end(),
                         [&](const Word& w) { return selects(s, w); });
    }
    case ConditionKind::requires_program:
      return contains_program(e, c.program);
  }
  return false;
}

SideResult side_result(const EvalOutcome& o) {
  SideResult r;
  r.defined = o.is_value();
  r.exhausted = o.out_of_fuel();
  if (o.is_value()) r.word = o.value;
  return r;
}

EvalOutcome member_outcome(const Env& e, std::size_t i, Fuel fuel) {
  RunResult r = run_member(e, i, fuel);
  switch (r.kind) {
    case RunResult::Kind::env:
    case RunResult::Kind::malformed:
      return EvalOutcome::val(r.raw, r.consumed);
    case RunResult::Kind::undefined:
      return EvalOutcome::undef(r.reason, r.consumed);
    case RunResult::Kind::out_of_fuel:
      return EvalOutcome::exhausted(r.consumed);
  }
  return EvalOutcome::undef("unreachable", 0);
}

EvalOutcome chain(EvalOutcome first,
                  const std::function<EvalOutcome(const Word&)>& next) {
  if (!first.is_value()) return first;
  return next(first.value);
}

EvalOutcome vacuous() { return EvalOutcome::val({}, 0); }

// first data word the search would select, if any
std::optional<Word> data_of_record(const SearchSpec& s, const Env& e) {
  for (const Word& w : e.data)
    if (selects(s, w)) return w;
  return std::nullopt;
}

constexpr const char* kRecoveryFailed = "#recovery-failed";

using Sides = std::pair<EquationSide, EquationSide>;

Sides whole_env_sides(const Forged& f) {
  EquationSide lhs = [f](const Env& e, Fuel fuel) {
    return interp(f.v, encode_env(e), fuel);
  };
  EquationSide rhs = [f](const Env& e, Fuel) {
    return EvalOutcome::val(encode_env(expected_infection(f, e)), 0);
  };
  return {lhs, rhs};
}

Sides imitation_sides(const Forged& f) {
  auto strip = [f](const Env& e) {
    Env out = e;
    out.programs.clear();
    for (const Word& w : e.programs)
      if (!selects(f.blueprint.search, w)) out.programs.push_back(w);
    return out;
  };
  EquationSide lhs = [f, strip](const Env& e, Fuel fuel) {
    return interp(f.v, encode_env(strip(e)), fuel);
  };
  EquationSide rhs = [strip](const Env& e, Fuel) {
    return EvalOutcome::val(encode_env(strip(e)), 0);
  };
  return {lhs, rhs};
}

Sides composite_sides(const Forged& f, ConcatOrder order) {
  EquationSide lhs = [f](const Env& e, Fuel fuel) {
    if (e.programs.empty()) return vacuous();
    return interp(f.infect_program(e.programs[0]), encode_env(e), fuel);
  };
  EquationSide rhs = [f, order](const Env& e, Fuel fuel) {
    if (e.programs.empty()) return vacuous();
    const Word& host = e.programs[0];
    if (order == ConcatOrder::virus_first)
      return chain(interp(f.v, encode_env(e), fuel),
                   [&](const Word& w) { return interp(host, w, fuel); });
    return chain(interp(host, encode_env(e), fuel),
                 [&](const Word& w) { return interp(f.v, w, fuel); });
  };
  return {lhs, rhs};
}

Sides recovery_sides(const Forged& f) {
  EquationSide lhs = [f](const Env& e, Fuel) {
    if (e.programs.empty()) return vacuous();
    auto parts = sequenced_parts(f.infect_program(e.programs[0]));
    if (!parts || parts->v != f.v)
      return EvalOutcome::val(Word(kRecoveryFailed), 0);
    return EvalOutcome::val(parts->j, 0);
  };
  EquationSide rhs = [](const Env& e, Fuel) {
    if (e.programs.empty()) return vacuous();
    return EvalOutcome::val(e.programs[0], 0);
  };
  return {lhs, rhs};
}

Sides hosts_unchanged_sides(const Forged& f) {
  EquationSide lhs = [f](const Env& e, Fuel fuel) {
    return chain(interp(f.v, encode_env(e), fuel), [&](const Word& w) {
      Env after;
      try {
        after = decode_env(w);
      } catch (const MalformedEnvResult&) {
        return EvalOutcome::val(w, 0);
      }
      if (after.programs.size() < e.programs.size())
        return EvalOutcome::val(w, 0);
      std::vector<Word> head(after.programs.begin(),
                             after.programs.begin() +
                                 static_cast<std::ptrdiff_t>(e.programs.size()));
      return EvalOutcome::val(encode_tuple(head), 0);
    });
  };
  EquationSide rhs = [](const Env& e, Fuel) {
    return EvalOutcome::val(encode_tuple(e.programs), 0);
  };
  return {lhs, rhs};
}

Sides render_commute_sides(const Forged& f) {
  SearchSpec search = f.cls == VirusClass::multipartite
                          ? f.blueprint.parts[1].search
                          : f.blueprint.search;
  Word tool = f.renderer;
  EquationSide lhs = [f, search, tool](const Env& e, Fuel fuel) {
    auto doc = data_of_record(search, e);
    if (!doc || !contains_program(e, tool)) return vacuous();
    return interp(tool, pair_words(f.infect_data(*doc), encode_env(e)), fuel);
  };
  EquationSide rhs = [f, search, tool](const Env& e, Fuel fuel) {
    auto doc = data_of_record(search, e);
    if (!doc || !contains_program(e, tool)) return vacuous();
    return chain(interp(f.v, encode_env(e), fuel), [&](const Word& w) {
      return interp(tool, pair_words(*doc, w), fuel);
    });
  };
  return {lhs, rhs};
}

// strips every copy of the tool from the shelf, then expects identity
Sides inactive_without_tool_sides(const Forged& f, Word tool) {
  auto strip = [tool](const Env& e) {
    Env out = e;
    std::erase(out.programs, tool);
    return out;
  };
  EquationSide lhs = [f, strip](const Env& e, Fuel fuel) {
    return interp(f.v, encode_env(strip(e)), fuel);
  };
  EquationSide rhs = [strip](const Env& e, Fuel) {
    return EvalOutcome::val(encode_env(strip(e)), 0);
  };
  return {lhs, rhs};
}

Sides compile_run_commute_sides(const Forged& f) {
  EquationSide lhs = [f](const Env& e, Fuel fuel) {
    auto src = data_of_record(f.blueprint.search, e);
    if (!src || !contains_program(e, f.compiler)) return vacuous();
    return chain(interp(f.compiler, f.infect_data(*src), fuel),
                 [&](const Word& w) { return interp(w, encode_env(e), fuel); });
  };
  EquationSide rhs = [f](const Env& e, Fuel fuel) {
    auto src = data_of_record(f.blueprint.search, e);
    if (!src || !contains_program(e, f.compiler)) return vacuous();
    auto embedded = source_embedded(*src);
    if (!embedded) return EvalOutcome::val(Word(kRecoveryFailed), 0);
    return chain(interp(f.v, encode_env(e), fuel), [&](const Word& w) {
      return interp(*embedded, w, fuel);
    });
  };
  return {lhs, rhs};
}

Sides clean_compile_sides(const Forged& f) {
  EquationSide lhs = [f](const Env& e, Fuel fuel) {
    auto src = data_of_record(f.blueprint.search, e);
    if (!src) return vacuous();
    return interp(f.compiler, *src, fuel);
  };
  EquationSide rhs = [f](const Env& e, Fuel) {
    auto src = data_of_record(f.blueprint.search, e);
    if (!src) return vacuous();
    auto embedded = source_embedded(*src);
    if (!embedded) return EvalOutcome::val(Word(kRecoveryFailed), 0);
    return EvalOutcome::val(*embedded, 0);
  };
  return {lhs, rhs};
}

std::vector<Word> expected_copies(const Forged& f, const Env& e) {
  std::vector<Word> copies;
  if (!condition_holds(f.blueprint.condition, e, f.blueprint.search)) return copies;
  for (std::size_t i : selected_indices(f.blueprint.search, e.programs))
    copies.push_back(e.programs[i]);
  return copies;
}

Sides copies_preserved_sides(const Forged& f) {
  EquationSide lhs = [f](const Env& e, Fuel fuel) {
    return chain(interp(f.v, encode_env(e), fuel), [&](const Word& w) {
      std::size_t m = expected_copies(f, e).size();
      Env after;
      try {
        after = decode_env(w);
      } catch (const MalformedEnvResult&) {
        return EvalOutcome::val(w, 0);
      }
      if (after.programs.size() < m) return EvalOutcome::val(w, 0);
      std::vector<Word> tail(after.programs.end() - static_cast<std::ptrdiff_t>(m),
                             after.programs.end());
      return EvalOutcome::val(encode_tuple(tail), 0);
    });
  };
  EquationSide rhs = [f](const Env& e, Fuel) {
    return EvalOutcome::val(encode_tuple(expected_copies(f, e)), 0);
  };
  return {lhs, rhs};
}

// member-run of the first infected slot against host-after-virus on the same
// residual environment
Sides member_composition_sides(const Forged& f) {
  auto guard = [f](const Env& e) -> std::optional<std::size_t> {
    if (!condition_holds(f.blueprint.condition, e, f.blueprint.search))
      return std::nullopt;
    auto sel = selected_indices(f.blueprint.search, e.programs);
    if (sel.empty()) return std::nullopt;
    return sel[0];
  };
  EquationSide lhs = [f, guard](const Env& e, Fuel fuel) {
    auto i0 = guard(e);
    if (!i0) return vacuous();
    EvalOutcome r = interp(f.v, encode_env(e), fuel);
    if (!r.is_value()) return r;
    Env after;
    try {
      after = decode_env(r.value);
    } catch (const MalformedEnvResult&) {
      return EvalOutcome::val(r.value, 0);
    }
    if (*i0 >= after.programs.size()) return EvalOutcome::val(r.value, 0);
    return member_outcome(after, *i0, fuel);
  };
  EquationSide rhs = [f, guard](const Env& e, Fuel fuel) {
    auto i0 = guard(e);
    if (!i0) return vacuous();
    EvalOutcome r = interp(f.v, encode_env(e), fuel);
    if (!r.is_value()) return r;
    Env after;
    try {
      after = decode_env(r.value);
    } catch (const MalformedEnvResult&) {
      return EvalOutcome::val(r.value, 0);
    }
    if (*i0 >= after.programs.size()) return EvalOutcome::val(r.value, 0);
    const Word host = e.programs[*i0];
    Env rest = env_without_program(after, *i0);
    return chain(interp(f.v, encode_env(rest), fuel),
                 [&](const Word& w) { return interp(host, w, fuel); });
  };
  return {lhs, rhs};
}

Sides stub_omits_host_sides(const Forged& f) {
  EquationSide lhs = [f](const Env& e, Fuel) {
    if (!condition_holds(f.blueprint.condition, e, f.blueprint.search))
      return vacuous();
    auto sel = selected_indices(f.blueprint.search, e.programs);
    std::size_t m = sel.size();
    for (std::size_t r0 = 0; r0 < m; ++r0) {
      const Word& host = e.programs[sel[r0]];
      if (host.size() < 16) continue;
      Word stub = f.companion_form(m - r0);
      if (stub.find(host) != Word::npos) return EvalOutcome::val(Word("00"), 0);
    }
    return vacuous();
  };
  EquationSide rhs = [](const Env&, Fuel) { return vacuous(); };
  return {lhs, rhs};
}

Sides virus_stored_sides(const Forged& f) {
  auto active = [f](const Env& e) {
    return condition_holds(f.blueprint.condition, e, f.blueprint.search) &&
           !selected_indices(f.blueprint.search, e.programs).empty();
  };
  EquationSide lhs = [f, active](const Env& e, Fuel fuel) {
    if (!active(e)) return vacuous();
    return chain(interp(f.v, encode_env(e), fuel), [&](const Word& w) {
      Env after;
      try {
        after = decode_env(w);
      } catch (const MalformedEnvResult&) {
        return EvalOutcome::val(w, 0);
      }
      if (after.programs.empty()) return EvalOutcome::val(w, 0);
      return EvalOutcome::val(after.programs.back(), 0);
    });
  };
  EquationSide rhs = [f, active](const Env& e, Fuel) {
    if (!active(e)) return vacuous();
    return EvalOutcome::val(f.v, 0);
  };
  return {lhs, rhs};
}

Sides idempotence_sides(const Forged& f) {
  EquationSide lhs = [f](const Env& e, Fuel fuel) {
    return chain(interp(f.v, encode_env(e), fuel),
                 [&](const Word& w) { return interp(f.v, w, fuel); });
  };
  EquationSide rhs = [f](const Env& e, Fuel fuel) {
    return interp(f.v, encode_env(e), fuel);
  };
  return {lhs, rhs};
}

Sides pad_equation_sides(const Forged& f) {
  EquationSide lhs = [f](const Env& e, Fuel fuel) {
    return interp(f.pad(f.v), encode_env(e), fuel);
  };
  EquationSide rhs = [f](const Env& e, Fuel) {
    Env out = e;
    if (condition_holds(f.blueprint.condition, e, f.blueprint.search)) {
      Word next = f.pad(f.tau(f.v));
      for (std::size_t i : selected_indices(f.blueprint.search, e.programs))
        out.programs[i] = next;
    }
    return EvalOutcome::val(encode_env(out), 0);
  };
  return {lhs, rhs};
}

Sides junk_equivalence_sides(const Forged& f) {
  EquationSide lhs = [f](const Env& e, Fuel fuel) {
    return interp(f.tau(f.v), encode_env(e), fuel);
  };
  EquationSide rhs = [f](const Env& e, Fuel fuel) {
    return interp(f.v, encode_env(e), fuel);
  };
  return {lhs, rhs};
}

Sides generations_distinct_sides(const Forged& f) {
  EquationSide lhs = [f](const Env&, Fuel) {
    std::vector<Word> gens;
    Word seed = f.v;
    for (int k = 0; k < 5; ++k) {
      gens.push_back(f.pad(seed));
      seed = f.tau(seed);
    }
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j)
        if (gens[i] == gens[j]) return EvalOutcome::val(Word("00"), 0);
    return vacuous();
  };
  EquationSide rhs = [](const Env&, Fuel) { return vacuous(); };
  return {lhs, rhs};
}

Sides generation_quotient_sides(const Forged& f) {
  auto normalized_run = [f](const Env& e, Fuel fuel, int k) -> EvalOutcome {
    Word seed = f.v;
    for (int i = 1; i < k; ++i) seed = f.tau(seed);
    EvalOutcome r = interp(f.pad(seed), encode_env(e), fuel);
    if (!r.is_value()) return r;
    Env after;
    try {
      after = decode_env(r.value);
    } catch (const MalformedEnvResult&) {
      return EvalOutcome::val(r.value, 0);
    }
    return EvalOutcome::val(encode_env(junk_normal_env(after)), 0);
  };
  auto run_range = [normalized_run](const Env& e, Fuel fuel, int first) {
    std::vector<Word> words;
    for (int k = first; k < first + 2; ++k) {
      EvalOutcome r = normalized_run(e, fuel, k);
      if (!r.is_value()) return r;
      words.push_back(r.value);
    }
    return EvalOutcome::val(encode_tuple(words), 0);
  };
  EquationSide lhs = [run_range](const Env& e, Fuel fuel) {
    return run_range(e, fuel, 1);
  };
  EquationSide rhs = [run_range](const Env& e, Fuel fuel) {
    return run_range(e, fuel, 2);
  };
  return {lhs, rhs};
}

Sides depth_recoverable_sides(const Forged& f) {
  EquationSide lhs = [f](const Env&, Fuel) {
    auto parts = smn_parts(f.phi(nat_word(1)));
    if (!parts) return EvalOutcome::val(Word(kRecoveryFailed), 0);
    return EvalOutcome::val(parts->second, 0);
  };
  EquationSide rhs = [](const Env&, Fuel) {
    return EvalOutcome::val(nat_word(1), 0);
  };
  return {lhs, rhs};
}

Sides equation_sides(const Forged& f, const std::string& id) {
  if (id == "image-equals-virus" || id == "appends-one-copy-per-target" ||
      id == "single-pass-both-sections" || id == "image-is-next-depth")
    return whole_env_sides(f);
  if (id == "imitation-outside-selection") return imitation_sides(f);
  if (id == "composite-runs-virus-then-host")
    return composite_sides(f, ConcatOrder::virus_first);
  if (id == "composite-runs-host-then-virus")
    return composite_sides(f, ConcatOrder::host_first);
  if (id == "program-part-matches-ecto")
    return composite_sides(f, f.blueprint.parts[0].order);
  if (id == "host-recoverable-from-image") return recovery_sides(f);
  if (id == "hosts-unchanged") return hosts_unchanged_sides(f);
  if (id == "render-commutes-with-infection" ||
      id == "document-part-matches-document")
    return render_commute_sides(f);
  if (id == "inactive-without-renderer")
    return inactive_without_tool_sides(f, f.renderer);
  if (id == "inactive-without-compiler")
    return inactive_without_tool_sides(f, f.compiler);
  if (id == "compile-then-run-commutes") return compile_run_commute_sides(f);
  if (id == "clean-compile-verbatim") return clean_compile_sides(f);
  if (id == "originals-preserved-as-copies") return copies_preserved_sides(f);
  if (id == "member-runs-virus-then-original" ||
      id == "stub-launches-virus-then-host")
    return member_composition_sides(f);
  if (id == "stub-omits-host-bytes") return stub_omits_host_sides(f);
  if (id == "virus-stored-verbatim") return virus_stored_sides(f);
  if (id == "idempotent-on-infected") return idempotence_sides(f);
  if (id == "pad-equation") return pad_equation_sides(f);
  if (id == "junk-wrapper-equivalence") return junk_equivalence_sides(f);
  if (id == "generations-distinct") return generations_distinct_sides(f);
  if (id == "generations-equivalent-modulo-junk")
    return generation_quotient_sides(f);
  if (id == "depth-word-recoverable") return depth_recoverable_sides(f);
  throw std::logic_error("no checker for equation id: " + id);
}

}  // namespace

bool EquationCheck::inconclusive() const {
  return std::any_of(verdicts.begin(), verdicts.end(), [](const ProbeVerdict& v) {
    return v.verdict == Verdict::inconclusive;
  });
}

bool ClassReport::inconclusive() const {
  return std::any_of(equations.begin(), equations.end(),
                     [](const EquationCheck& c) { return c.inconclusive(); });
}

EquationCheck check_equation(std::string id, const EquationSide& lhs,
                             const EquationSide& rhs,
                             const std::vector<Env>& probes, Fuel fuel) {
  if (probes.empty())
    throw std::invalid_argument("check_equation needs at least one probe");
  EquationCheck out;
  out.id = std::move(id);
  bool all_equal = true;
  bool starved = false;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    EvalOutcome a = lhs(probes[i], fuel);
    EvalOutcome b = rhs(probes[i], fuel);
    ProbeVerdict pv;
    pv.probe = i;
    if (a.out_of_fuel() || b.out_of_fuel()) {
      pv.verdict = Verdict::inconclusive;
      pv.lhs = side_result(a);
      pv.rhs = side_result(b);
      starved = true;
    } else if (a.is_value() != b.is_value() ||
               (a.is_value() && a.value != b.value)) {
      pv.verdict = Verdict::unequal;
      pv.witness = probes[i];
      pv.lhs = side_result(a);
      pv.rhs = side_result(b);
      all_equal = false;
    } else {
      pv.verdict = Verdict::equal;
    }
    out.verdicts.push_back(std::move(pv));
  }
  out.pass = all_equal && !starved;
  return out;
}

Env expected_infection(const Forged& f, const Env& e) {
  const Blueprint& bp = f.blueprint;
  Env out = e;
  switch (f.cls) {
    case VirusClass::overwriter: {
      if (!condition_holds(bp.condition, e, bp.search)) return out;
      for (std::size_t i : selected_indices(bp.search, e.programs))
        out.programs[i] = f.v;
      return out;
    }
    case VirusClass::ecto_symbiote: {
      if (!condition_holds(bp.condition, e, bp.search)) return out;
      for (std::size_t i : selected_indices(bp.search, e.programs))
        out.programs[i] = f.infect_program(e.programs[i]);
      return out;
    }
    case VirusClass::duplicator: {
      if (!condition_holds(bp.condition, e, bp.search)) return out;
      for (std::size_t i : selected_indices(bp.search, e.programs)) {
        (void)i;
        out.programs.push_back(f.v);
      }
      return out;
    }
    case VirusClass::document:
    case VirusClass::source: {
      if (!condition_holds(bp.condition, e, bp.search)) return out;
      for (std::size_t i : selected_indices(bp.search, e.data))
        out.data[i] = f.infect_data(e.data[i]);
      return out;
    }
    case VirusClass::companion: {
      if (!condition_holds(bp.condition, e, bp.search)) return out;
      auto sel = selected_indices(bp.search, e.programs);
      std::size_t m = sel.size();
      for (std::size_t r0 = 0; r0 < m; ++r0)
        out.programs[sel[r0]] = f.companion_form(m - r0);
      for (std::size_t i : sel) out.programs.push_back(e.programs[i]);
      return out;
    }
    case VirusClass::launcher: {
      if (!condition_holds(bp.condition, e, bp.search)) return out;
      auto sel = selected_indices(bp.search, e.programs);
      if (sel.empty()) return out;
      for (std::size_t i : sel)
        out.programs[i] = f.infect_program(e.programs[i]);
      out.programs.push_back(f.v);
      return out;
    }
    case VirusClass::multipartite: {
      const Blueprint& prog = bp.parts[0];
      const Blueprint& doc = bp.parts[1];
      for (std::size_t i : selected_indices(prog.search, e.programs))
        out.programs[i] = f.infect_program(e.programs[i]);
      if (condition_holds(doc.condition, e, doc.search))
        for (std::size_t i : selected_indices(doc.search, e.data))
          out.data[i] = f.infect_data(e.data[i]);
      return out;
    }
    case VirusClass::generation_counter: {
      if (!condition_holds(bp.condition, e, bp.search)) return out;
      Word next = f.phi(nat_word(1));
      for (std::size_t i : selected_indices(bp.search, e.programs))
        out.programs[i] = next;
      return out;
    }
    case VirusClass::polymorphic: {
      if (!condition_holds(bp.condition, e, bp.search)) return out;
      Word next = f.infect_program({});
      for (std::size_t i : selected_indices(bp.search, e.programs))
        out.programs[i] = next;
      return out;
    }
  }
  return out;
}

ClassReport verify_class(const Forged& f, const std::vector<Env>& probes,
                         Fuel fuel) {
  ClassReport report;
  report.cls = f.cls;
  bool pass = true;
  for (const std::string& id : f.equations) {
    auto [lhs, rhs] = equation_sides(f, id);
    EquationCheck check = check_equation(id, lhs, rhs, probes, fuel);
    pass = pass && check.pass;
    report.equations.push_back(std::move(check));
  }
  report.pass = pass;
  return report;
}

BonfanteReport bonfante_demo(Fuel fuel) {
  Blueprint bp;
  bp.cls = VirusClass::ecto_symbiote;
  Forged f = forge(bp);

  BonfanteReport report;
  report.v = f.v;
  const Word deleting = "''";
  const Word identity = "x0";
  const std::vector<Word> extras = {"(pair (snd x0) (fst x0))", "(cat x0 x0)",
                                    "(fst x0)"};
  bool pass = true;
  for (std::size_t n = 1; n <= 4; ++n) {
    BonfanteCase c;
    c.n = n;

    Env hostile{{Word("#specimen")}, {deleting}};
    Env friendly{{Word("#specimen")}, {identity}};
    for (std::size_t k = 0; k + 2 <= n; ++k) {
      hostile.programs.push_back(extras[k]);
      friendly.programs.push_back(extras[k]);
    }

    RunResult spread = run_external(f.v, hostile, fuel);
    if (spread.kind != RunResult::Kind::env) {
      report.cases.push_back(std::move(c));
      pass = false;
      continue;
    }
    c.infected_env_word = spread.raw;

    RunResult member = run_member(spread.env, 0, fuel);
    c.deleting_member_word = member.raw;
    EvalOutcome viral = interp(
        f.v, encode_env(env_without_program(spread.env, 0)), fuel);
    c.deleting_unequal = member.kind == RunResult::Kind::env &&
                         viral.is_value() && member.raw != viral.value;

    RunResult spread2 = run_external(f.v, friendly, fuel);
    if (spread2.kind == RunResult::Kind::env) {
      RunResult member2 = run_member(spread2.env, 0, fuel);
      EvalOutcome viral2 = interp(
          f.v, encode_env(env_without_program(spread2.env, 0)), fuel);
      c.identity_equal = (member2.kind == RunResult::Kind::env ||
                          member2.kind == RunResult::Kind::malformed) &&
                         viral2.is_value() && member2.raw == viral2.value;
    }

    pass = pass && c.deleting_unequal && c.identity_equal;
    report.cases.push_back(std::move(c));
  }
  report.pass = pass;
  return report;
}

const char* target_type_name(TargetType t) {
  switch (t) {
    case TargetType::program: return "program";
    case TargetType::data: return "data";
    case TargetType::new_file: return "new_file";
  }
  return "?";
}

const char* host_modification_name(HostModification m) {
  switch (m) {
    case HostModification::destructive: return "destructive";
    case HostModification::preservative: return "preservative";
    case HostModification::partially_destructive: return "partially_destructive";
    case HostModification::not_applicable: return "n/a";
  }
  return "?";
}

namespace {

struct Observation {
  const Env* before;
  Env after;
  EnvDelta delta;
};

void require_fuel(const EvalOutcome& o) {
  if (o.out_of_fuel())
    throw InsufficientProbes("fuel budget exhausted while judging preservation");
}

bool outcomes_agree(const EvalOutcome& a, const EvalOutcome& b) {
  if (a.is_value() != b.is_value()) return false;
  return !a.is_value() || a.value == b.value;
}

HostModification judge_program_preservation(const Word& v,
                                            const std::vector<Observation>& obs,
                                            Fuel fuel) {
  // image comparison is by word and cheap, so it covers everything; the
  // member runs are full evaluations, so a handful of samples has to carry
  // the behavioral judgment
  constexpr std::size_t kMemberRunsPerProbe = 2;
  constexpr std::size_t kMemberRunsTotal = 6;
  std::size_t member_runs = 0;
  bool judged = false;
  bool preserved = true;
  bool compared_pair = false;
  bool images_identical = true;
  for (const Observation& o : obs) {
    std::vector<std::size_t> idx;
    for (const auto& rep : o.delta.replaced)
      if (rep.section == Section::programs) idx.push_back(rep.index);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        if (o.before->programs[idx[a]] == o.before->programs[idx[b]]) continue;
        compared_pair = true;
        if (o.after.programs[idx[a]] != o.after.programs[idx[b]])
          images_identical = false;
      }
    if (idx.size() > kMemberRunsPerProbe) idx.resize(kMemberRunsPerProbe);
    for (std::size_t i : idx) {
      if (member_runs == kMemberRunsTotal) break;
      ++member_runs;
      RunResult m = run_member(o.after, i, fuel);
      if (m.kind == RunResult::Kind::out_of_fuel)
        throw InsufficientProbes("fuel budget exhausted in a member probe");
      EvalOutcome image = m.kind == RunResult::Kind::undefined
                              ? EvalOutcome::undef(m.reason, m.consumed)
                              : EvalOutcome::val(m.raw, m.consumed);
      EvalOutcome inner =
          interp(v, encode_env(env_without_program(o.after, i)), fuel);
      require_fuel(inner);
      EvalOutcome expected =
          inner.is_value()
              ? interp(o.before->programs[i], inner.value, fuel)
              : inner;
      require_fuel(expected);
      judged = true;
      preserved = preserved && outcomes_agree(image, expected);
    }
  }
  if (!judged)
    throw InsufficientProbes("no replaced resident program to judge");
  if (preserved) return HostModification::preservative;
  if (!compared_pair)
    throw InsufficientProbes(
        "need an environment with two distinct replaced hosts");
  return images_identical ? HostModification::destructive
                          : HostModification::partially_destructive;
}

HostModification judge_data_preservation(const Word& v,
                                         const std::vector<Observation>& obs,
                                         Fuel fuel) {
  const Word& renderer = make_doc_renderer();
  const Word& compiler = make_source_compiler();
  const Word& doc_mark = document_marker();
  const Word& src_mark = source_marker();
  auto has_prefix = [](const Word& w, const Word& p) {
    return w.size() >= p.size() && w.compare(0, p.size(), p) == 0;
  };
  bool judged = false;
  bool preserved = true;
  bool compared_pair = false;
  bool images_identical = true;
  for (const Observation& o : obs) {
    std::vector<std::size_t> idx;
    for (const auto& rep : o.delta.replaced)
      if (rep.section == Section::data) idx.push_back(rep.index);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        if (o.before->data[idx[a]] == o.before->data[idx[b]]) continue;
        compared_pair = true;
        if (o.after.data[idx[a]] != o.after.data[idx[b]])
          images_identical = false;
      }
    for (std::size_t i : idx) {
      const Word& orig = o.before->data[i];
      const Word& image = o.after.data[i];
      const Word env_word = encode_env(*o.before);
      EvalOutcome through_v = interp(v, env_word, fuel);
      require_fuel(through_v);
      if (!through_v.is_value()) continue;
      if (has_prefix(orig, doc_mark) && contains_program(*o.before, renderer)) {
        EvalOutcome lhs = interp(renderer, pair_words(image, env_word), fuel);
        EvalOutcome rhs =
            interp(renderer, pair_words(orig, through_v.value), fuel);
        require_fuel(lhs);
        require_fuel(rhs);
        judged = true;
        preserved = preserved && outcomes_agree(lhs, rhs);
      } else if (has_prefix(orig, src_mark) &&
                 contains_program(*o.before, compiler)) {
        EvalOutcome built = interp(compiler, image, fuel);
        require_fuel(built);
        EvalOutcome lhs = built.is_value()
                              ? interp(built.value, env_word, fuel)
                              : built;
        require_fuel(lhs);
        EvalOutcome embedded = interp(compiler, orig, fuel);
        require_fuel(embedded);
        EvalOutcome rhs = embedded.is_value()
                              ? interp(embedded.value, through_v.value, fuel)
                              : embedded;
        require_fuel(rhs);
        judged = true;
        preserved = preserved && outcomes_agree(lhs, rhs);
      }
    }
  }
  if (!judged)
    throw InsufficientProbes(
        "no canonical consumer available to judge data preservation");
  if (preserved) return HostModification::preservative;
  if (!compared_pair) return HostModification::partially_destructive;
  return images_identical ? HostModification::destructive
                          : HostModification::partially_destructive;
}

}  // namespace

TraitReport classify_traits(const Word& v, const std::vector<Env>& probes,
                            Fuel fuel) {
  if (probes.empty()) throw InsufficientProbes("no probes supplied");
  bool corpus_has_host_pair = false;
  bool corpus_has_document = false;
  for (const Env& e : probes) {
    for (std::size_t a = 0; a < e.programs.size() && !corpus_has_host_pair; ++a)
      for (std::size_t b = a + 1; b < e.programs.size(); ++b)
        if (e.programs[a] != e.programs[b]) {
          corpus_has_host_pair = true;
          break;
        }
    for (const Word& d : e.data)
      if (d.size() >= document_marker().size() &&
          d.compare(0, document_marker().size(), document_marker()) == 0)
        corpus_has_document = true;
  }
  if (!corpus_has_host_pair || !corpus_has_document)
    throw InsufficientProbes(
        "corpus must offer two distinct resident hosts and a document");

  std::vector<Observation> obs;
  bool replaced_program = false;
  bool replaced_data = false;
  std::size_t spread = std::numeric_limits<std::size_t>::max();
  for (const Env& e : probes) {
    RunResult r = run_external(v, e, fuel);
    if (r.kind == RunResult::Kind::out_of_fuel)
      throw InsufficientProbes("fuel budget exhausted while probing");
    if (r.kind != RunResult::Kind::env) continue;
    EnvDelta d = diff_envs(e, r.env);
    if (d.empty()) continue;
    for (const auto& rep : d.replaced) {
      if (rep.section == Section::programs) replaced_program = true;
      if (rep.section == Section::data) replaced_data = true;
    }
    std::size_t touched = d.replaced.size() + d.added.size();
    if (touched > 0) spread = std::min(spread, touched);
    obs.push_back(Observation{&e, std::move(r.env), std::move(d)});
  }
  if (obs.empty())
    throw InsufficientProbes("the specimen never acts on this corpus");

  TraitReport report;
  report.target_type = replaced_program ? TargetType::program
                       : replaced_data  ? TargetType::data
                                        : TargetType::new_file;
  report.spread_count =
      spread == std::numeric_limits<std::size_t>::max() ? 0 : spread;
  switch (report.target_type) {
    case TargetType::new_file:
      report.host_modification = HostModification::not_applicable;
      break;
    case TargetType::program:
      report.host_modification = judge_program_preservation(v, obs, fuel);
      break;
    case TargetType::data:
      report.host_modification = judge_data_preservation(v, obs, fuel);
      break;
  }
  return report;
}

std::vector<Env> probe_corpus(std::size_t count, std::uint64_t seed) {
  const Word identity = "x0";
  const Word deleting = "''";
  const Word swapping = "(pair (snd x0) (fst x0))";
  const Word doubling = "(cat (fst x0) (fst x0))";
  const Word long_a = "(cat x0 '00112233445566778899aabbccddeeff')";
  const Word long_b = "(cat x0 (cat x0 '00ff'))";
  const Word& renderer = make_doc_renderer();
  const Word& compiler = make_source_compiler();
  const Word doc_plain = make_document_word({}, "quarterly-report");
  const Word doc_scripted = make_document_word("x0", "signed-report");
  const Word src_plain = make_source_word("(fst x0)");

  std::vector<Env> fixed = {
      Env{{Word("#note")}, {long_a}},
      Env{{Word("#note"), doc_plain}, {renderer}},
      Env{{src_plain}, {compiler}},
      Env{{Word("#a")}, {deleting, swapping}},
      Env{{Word("#a"), Word("#b")}, {identity, deleting, long_a}},
      Env{{doc_scripted, Word("#z")}, {renderer, identity}},
      Env{{src_plain, Word("#z")}, {compiler, long_b}},
      Env{{Word("#lone")}, {}},
  };

  std::vector<Env> out;
  for (const Env& e : fixed) {
    if (out.size() == count) return out;
    out.push_back(e);
  }

  const std::vector<Word> pool = {identity, deleting, swapping, doubling,
                                  long_a,   long_b,   renderer, compiler};
  std::mt19937_64 rng(seed);
  while (out.size() < count) {
    Env e;
    std::size_t data_count = 1 + rng() % 2;
    for (std::size_t i = 0; i < data_count; ++i) {
      Word w = "#";
      for (int b = 0; b < 4; ++b) w.push_back(static_cast<char>('a' + rng() % 26));
      e.data.push_back(std::move(w));
    }
    if (out.size() % 3 == 0) e.data.push_back(doc_plain);
    if (out.size() % 4 == 0) e.data.push_back(src_plain);
    std::size_t prog_count = 1 + rng() % 3;
    for (std::size_t i = 0; i < prog_count; ++i)
      e.programs.push_back(pool[rng() % pool.size()]);
    out.push_back(std::move(e));
  }
  return out;
}

Env junk_normal_env(const Env& e) {
  Env out = e;
  for (Word& p : out.programs) p = junk_normal_form(p);
  return out;
}

}  // namespace virolab
