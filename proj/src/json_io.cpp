#include "virolab/json_io.hpp"

#include <utility>
#include <vector>

namespace virolab {

namespace {

Word hex_field(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw BadInput(std::string("missing or non-string field: ") + key);
  try {
    return from_hex(j[key].get<std::string>());
  } catch (const std::invalid_argument&) {
    throw BadInput(std::string("field is not a hex word: ") + key);
  }
}

std::vector<Word> hex_list(const ordered_json& j, const char* key) {
  std::vector<Word> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array())
    throw BadInput(std::string("field must be an array: ") + key);
  for (const auto& item : j[key]) {
    if (!item.is_string())
      throw BadInput(std::string("non-string entry under: ") + key);
    try {
      out.push_back(from_hex(item.get<std::string>()));
    } catch (const std::invalid_argument&) {
      throw BadInput(std::string("non-hex entry under: ") + key);
    }
  }
  return out;
}

const char* target_kind_name(TargetKind t) {
  return t == TargetKind::programs ? "programs" : "data";
}

TargetKind target_kind_from(const std::string& s) {
  if (s == "programs") return TargetKind::programs;
  if (s == "data") return TargetKind::data;
  throw BadInput("unknown search target: " + s);
}

const char* predicate_name(PredicateKind p) {
  switch (p) {
    case PredicateKind::all: return "all";
    case PredicateKind::all_except_infected: return "all_except_infected";
    case PredicateKind::prefix_match: return "prefix_match";
  }
  return "?";
}

PredicateKind predicate_from(const std::string& s) {
  if (s == "all") return PredicateKind::all;
  if (s == "all_except_infected") return PredicateKind::all_except_infected;
  if (s == "prefix_match") return PredicateKind::prefix_match;
  throw BadInput("unknown search predicate: " + s);
}

const char* condition_name(ConditionKind c) {
  switch (c) {
    case ConditionKind::always: return "always";
    case ConditionKind::nonempty_selection: return "nonempty_selection";
    case ConditionKind::requires_program: return "requires_program";
  }
  return "?";
}

ConditionKind condition_from(const std::string& s) {
  if (s == "always") return ConditionKind::always;
  if (s == "nonempty_selection") return ConditionKind::nonempty_selection;
  if (s == "requires_program") return ConditionKind::requires_program;
  throw BadInput("unknown condition kind: " + s);
}

Word auto_tool(VirusClass cls) {
  switch (cls) {
    case VirusClass::document:
    case VirusClass::multipartite:
      return make_doc_renderer();
    case VirusClass::source:
      return make_source_compiler();
    default:
      throw BadInput(std::string("\"t\": \"auto\" has no meaning for class ") +
                     virus_class_name(cls));
  }
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::equal: return "equal";
    case Verdict::unequal: return "unequal";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

ordered_json side_to_json(const SideResult& s) {
  ordered_json j;
  j["defined"] = s.defined;
  j["exhausted"] = s.exhausted;
  if (s.defined) j["word"] = to_hex(s.word);
  return j;
}

}  // namespace

ordered_json env_to_json(const Env& e) {
  ordered_json j;
  j["data"] = ordered_json::array();
  for (const Word& w : e.data) j["data"].push_back(to_hex(w));
  j["programs"] = ordered_json::array();
  for (const Word& w : e.programs) j["programs"].push_back(to_hex(w));
  return j;
}

Env env_from_json(const ordered_json& j) {
  if (!j.is_object()) throw BadInput("environment file must hold a JSON object");
  Env e;
  e.data = hex_list(j, "data");
  e.programs = hex_list(j, "programs");
  if (!well_formed_env(e))
    throw BadInput("environment data words must carry the data marker");
  return e;
}

ordered_json blueprint_to_json(const Blueprint& bp) {
  ordered_json j;
  j["class"] = virus_class_name(bp.cls);
  j["search"] = {{"target", target_kind_name(bp.search.target)},
                 {"predicate", predicate_name(bp.search.predicate)}};
  if (bp.search.predicate == PredicateKind::prefix_match)
    j["search"]["prefix"] = to_hex(bp.search.prefix);
  j["condition"] = {{"kind", condition_name(bp.condition.kind)}};
  if (bp.condition.kind == ConditionKind::requires_program)
    j["condition"]["program"] = to_hex(bp.condition.program);
  j["order"] =
      bp.order == ConcatOrder::virus_first ? "virus_first" : "host_first";
  if (!bp.tool.empty()) j["t"] = to_hex(bp.tool);
  if (!bp.transform.empty()) j["transform"] = bp.transform;
  if (!bp.parts.empty()) {
    j["parts"] = ordered_json::array();
    for (const Blueprint& part : bp.parts)
      j["parts"].push_back(blueprint_to_json(part));
  }
  return j;
}

Blueprint blueprint_from_json(const ordered_json& j) {
  if (!j.is_object()) throw BadInput("blueprint must be a JSON object");
  if (!j.contains("class") || !j["class"].is_string())
    throw BadInput("blueprint needs a class");
  Blueprint bp;
  auto cls = virus_class_from_name(j["class"].get<std::string>());
  if (!cls) throw BadInput("unknown class: " + j["class"].get<std::string>());
  bp.cls = *cls;

  if (j.contains("search")) {
    const auto& s = j["search"];
    if (!s.is_object()) throw BadInput("search must be an object");
    if (s.contains("target"))
      bp.search.target = target_kind_from(s["target"].get<std::string>());
    if (s.contains("predicate"))
      bp.search.predicate = predicate_from(s["predicate"].get<std::string>());
    if (s.contains("prefix")) bp.search.prefix = hex_field(s, "prefix");
  }
  if (j.contains("condition")) {
    const auto& c = j["condition"];
    if (!c.is_object()) throw BadInput("condition must be an object");
    if (c.contains("kind"))
      bp.condition.kind = condition_from(c["kind"].get<std::string>());
    if (c.contains("program")) bp.condition.program = hex_field(c, "program");
  }
  if (j.contains("order")) {
    std::string o = j["order"].get<std::string>();
    if (o == "virus_first")
      bp.order = ConcatOrder::virus_first;
    else if (o == "host_first")
      bp.order = ConcatOrder::host_first;
    else
      throw BadInput("unknown order: " + o);
  }
  if (j.contains("t")) {
    if (!j["t"].is_string()) throw BadInput("t must be a string");
    std::string t = j["t"].get<std::string>();
    bp.tool = t == "auto" ? auto_tool(bp.cls) : hex_field(j, "t");
  }
  if (j.contains("transform")) bp.transform = j["transform"].get<std::string>();
  if (j.contains("parts")) {
    if (!j["parts"].is_array()) throw BadInput("parts must be an array");
    for (const auto& part : j["parts"])
      bp.parts.push_back(blueprint_from_json(part));
  }
  return bp;
}

ordered_json forged_to_json(const Forged& f) {
  ordered_json j;
  j["class"] = virus_class_name(f.cls);
  j["v"] = to_hex(f.v);
  j["transcript"] = ordered_json::array();
  for (const TranscriptStep& step : f.transcript)
    j["transcript"].push_back(
        {{"label", step.label}, {"text", to_hex(step.text)}});
  j["blueprint"] = blueprint_to_json(f.blueprint);
  return j;
}

ForgedFile forged_from_json(const ordered_json& j) {
  if (!j.is_object()) throw BadInput("forged artifact must be a JSON object");
  if (!j.contains("class") || !j["class"].is_string())
    throw BadInput("forged artifact needs a class");
  ForgedFile out;
  auto cls = virus_class_from_name(j["class"].get<std::string>());
  if (!cls) throw BadInput("unknown class: " + j["class"].get<std::string>());
  out.cls = *cls;
  out.v = hex_field(j, "v");
  if (j.contains("blueprint")) {
    out.blueprint = blueprint_from_json(j["blueprint"]);
    if (out.blueprint.cls != out.cls)
      throw BadInput("forged artifact class disagrees with its blueprint");
  } else {
    out.blueprint.cls = out.cls;
    if (out.cls == VirusClass::document || out.cls == VirusClass::source)
      out.blueprint.tool = auto_tool(out.cls);
    if (out.cls == VirusClass::multipartite) {
      Blueprint prog;
      prog.cls = VirusClass::ecto_symbiote;
      Blueprint doc;
      doc.cls = VirusClass::document;
      doc.tool = make_doc_renderer();
      out.blueprint.parts = {prog, doc};
    }
  }
  return out;
}

ordered_json delta_to_json(const EnvDelta& d) {
  ordered_json j;
  j["replaced"] = ordered_json::array();
  for (const auto& r : d.replaced)
    j["replaced"].push_back({{"section", section_name(r.section)},
                             {"index", r.index},
                             {"before", to_hex(r.before)},
                             {"after", to_hex(r.after)}});
  j["added"] = ordered_json::array();
  for (const auto& a : d.added)
    j["added"].push_back({{"section", section_name(a.section)},
                          {"index", a.index},
                          {"word", to_hex(a.word)}});
  j["removed"] = ordered_json::array();
  for (const auto& r : d.removed)
    j["removed"].push_back({{"section", section_name(r.section)},
                            {"index", r.index},
                            {"before", to_hex(r.before)}});
  return j;
}

ordered_json trait_report_to_json(const TraitReport& t) {
  ordered_json j;
  j["target_type"] = target_type_name(t.target_type);
  j["host_modification"] = host_modification_name(t.host_modification);
  j["spread_count"] = t.spread_count;
  return j;
}

ordered_json class_report_to_json(const ClassReport& r,
                                  const std::optional<TraitReport>& traits,
                                  const std::string& traits_note) {
  ordered_json j;
  j["class"] = virus_class_name(r.cls);
  j["equations"] = ordered_json::array();
  for (const EquationCheck& eq : r.equations) {
    ordered_json e;
    e["id"] = eq.id;
    e["pass"] = eq.pass;
    e["verdicts"] = ordered_json::array();
    for (const ProbeVerdict& pv : eq.verdicts) {
      ordered_json v;
      v["probe"] = pv.probe;
      v["verdict"] = verdict_name(pv.verdict);
      if (pv.verdict != Verdict::equal) {
        v["lhs"] = side_to_json(pv.lhs);
        v["rhs"] = side_to_json(pv.rhs);
      }
      if (pv.verdict == Verdict::unequal) v["witness"] = env_to_json(pv.witness);
      e["verdicts"].push_back(std::move(v));
    }
    j["equations"].push_back(std::move(e));
  }
  if (traits)
    j["traits"] = trait_report_to_json(*traits);
  else
    j["traits"] = nullptr;
  if (!traits_note.empty()) j["traits_note"] = traits_note;
  j["pass"] = r.pass;
  return j;
}

ordered_json bonfante_to_json(const BonfanteReport& r) {
  ordered_json j;
  j["v"] = to_hex(r.v);
  j["cases"] = ordered_json::array();
  for (const BonfanteCase& c : r.cases)
    j["cases"].push_back({{"programs", c.n},
                          {"infected_env", to_hex(c.infected_env_word)},
                          {"deleting_member_output", to_hex(c.deleting_member_word)},
                          {"deleting_unequal", c.deleting_unequal},
                          {"identity_equal", c.identity_equal}});
  j["pass"] = r.pass;
  return j;
}

Scenario scenario_from_json(const ordered_json& j) {
  if (!j.is_object()) throw BadInput("scenario must be a JSON object");
  Scenario s;
  if (!j.contains("env") || !j["env"].is_string())
    throw BadInput("scenario needs an env file path");
  if (!j.contains("blueprint") || !j["blueprint"].is_string())
    throw BadInput("scenario needs a blueprint file path");
  s.env_path = j["env"].get<std::string>();
  s.blueprint_path = j["blueprint"].get<std::string>();
  if (j.contains("generations")) {
    if (!j["generations"].is_number_unsigned())
      throw BadInput("generations must be a nonnegative count");
    s.generations = j["generations"].get<std::uint64_t>();
  }
  if (j.contains("fuel")) {
    if (!j["fuel"].is_number_unsigned() || j["fuel"].get<std::uint64_t>() == 0)
      throw BadInput("fuel must be a positive budget");
    s.fuel = j["fuel"].get<std::uint64_t>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned())
      throw BadInput("seed must be a nonnegative number");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  return s;
}

}  // namespace virolab
