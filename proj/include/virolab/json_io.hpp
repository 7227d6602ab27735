#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "virolab/envmodel.hpp"
#include "virolab/verifier.hpp"
#include "virolab/virusforge.hpp"

// File formats: everything JSON, every word spelled in hex so a toy program
// can never be mistaken for anything the host system would run.

namespace virolab {

using ordered_json = nlohmann::ordered_json;

struct BadInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

[[nodiscard]] ordered_json env_to_json(const Env& e);
[[nodiscard]] Env env_from_json(const ordered_json& j);  // throws BadInput

[[nodiscard]] ordered_json blueprint_to_json(const Blueprint& bp);
// "t": "auto" resolves to the canonical renderer/compiler for the class;
// throws BadInput on malformed fields (forge still validates semantics)
[[nodiscard]] Blueprint blueprint_from_json(const ordered_json& j);

[[nodiscard]] ordered_json forged_to_json(const Forged& f);

// What a forged artifact file carries; closures are rebuilt by re-forging
// the recorded blueprint.
struct ForgedFile {
  VirusClass cls = VirusClass::overwriter;
  Blueprint blueprint;
  Word v;
};
[[nodiscard]] ForgedFile forged_from_json(const ordered_json& j);

[[nodiscard]] ordered_json delta_to_json(const EnvDelta& d);
[[nodiscard]] ordered_json trait_report_to_json(const TraitReport& t);
[[nodiscard]] ordered_json class_report_to_json(
    const ClassReport& r, const std::optional<TraitReport>& traits,
    const std::string& traits_note);
[[nodiscard]] ordered_json bonfante_to_json(const BonfanteReport& r);

struct Scenario {
  std::string env_path;
  std::string blueprint_path;
  std::uint64_t generations = 0;
  std::uint64_t fuel = 10'000'000;
  std::uint64_t seed = 0;
};
[[nodiscard]] Scenario scenario_from_json(const ordered_json& j);

}  // namespace virolab
