#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "virolab/json_io.hpp"
#include "virolab/recursion.hpp"
#include "virolab/verifier.hpp"

// Exit contract: 0 pass, 1 fail, 2 invalid input, 3 inconclusive (fuel ran
// out somewhere it must not be ignored).

namespace {

namespace fs = std::filesystem;
using virolab::ordered_json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kBadInput = 2;
constexpr int kInconclusive = 3;

ordered_json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw virolab::BadInput("cannot open " + path.string());
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& ex) {
    throw virolab::BadInput(path.string() + ": " + ex.what());
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw virolab::BadInput("cannot write " + path.string());
  out << text;
}

void write_json_file(const fs::path& path, const ordered_json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::vector<virolab::Env> load_corpus(const fs::path& dir, std::size_t cap) {
  if (!fs::is_directory(dir))
    throw virolab::BadInput("corpus path is not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<virolab::Env> probes;
  for (const fs::path& p : files) {
    if (probes.size() == cap) break;
    probes.push_back(virolab::env_from_json(read_json_file(p)));
  }
  if (probes.empty())
    throw virolab::BadInput("no environment files in " + dir.string());
  return probes;
}

// Rebuilds the forge model for a stored artifact. The recorded word replaces
// the freshly forged one, so a tampered artifact gets checked against the
// honest model of its class instead of against itself.
virolab::Forged model_for(const virolab::ForgedFile& file) {
  virolab::Forged f = virolab::forge(file.blueprint);
  f.v = file.v;
  return f;
}

int cmd_build(const std::string& blueprint_file, const std::string& out) {
  virolab::Blueprint bp =
      virolab::blueprint_from_json(read_json_file(blueprint_file));
  virolab::Forged f = virolab::forge(bp);
  write_json_file(out, virolab::forged_to_json(f));
  return kPass;
}

int cmd_run(const std::string& scenario_file, const std::string& out) {
  virolab::Scenario sc =
      virolab::scenario_from_json(read_json_file(scenario_file));
  fs::path base = fs::path(scenario_file).parent_path();
  virolab::Env env = virolab::env_from_json(read_json_file(base / sc.env_path));
  virolab::Blueprint bp =
      virolab::blueprint_from_json(read_json_file(base / sc.blueprint_path));
  virolab::Forged f = virolab::forge(bp);
  virolab::Fuel fuel{sc.fuel};

  std::string trace;
  auto flush = [&] { write_text_file(out, trace); };
  const virolab::Word& marker = virolab::smn_prefix();
  for (std::uint64_t step = 1; step <= sc.generations; ++step) {
    // the freshest shelf decides the actor: the first resident program the
    // lab itself emitted runs as a member, otherwise the forged virus gets
    // a free external run
    std::string actor = "external";
    virolab::RunResult r;
    bool resident = false;
    for (std::size_t i = 0; i < env.programs.size() && !resident; ++i) {
      const virolab::Word& w = env.programs[i];
      if (w.size() >= marker.size() &&
          w.compare(0, marker.size(), marker) == 0) {
        actor = "member:" + std::to_string(i);
        r = virolab::run_member(env, i, fuel);
        resident = true;
      }
    }
    if (!resident) r = virolab::run_external(f.v, env, fuel);

    if (r.kind == virolab::RunResult::Kind::out_of_fuel) {
      ordered_json line;
      line["step"] = step;
      line["actor"] = actor;
      line["error"] = "out_of_fuel";
      trace += line.dump() + "\n";
      flush();
      return kInconclusive;
    }
    if (r.kind != virolab::RunResult::Kind::env) {
      ordered_json line;
      line["step"] = step;
      line["actor"] = actor;
      line["error"] = r.kind == virolab::RunResult::Kind::undefined
                          ? "undefined"
                          : "malformed_environment";
      trace += line.dump() + "\n";
      flush();
      return kFail;
    }
    ordered_json line;
    line["step"] = step;
    line["actor"] = actor;
    line["delta"] = virolab::delta_to_json(virolab::diff_envs(env, r.env));
    trace += line.dump() + "\n";
    env = std::move(r.env);
  }
  ordered_json tail;
  tail["final_env"] = virolab::env_to_json(env);
  trace += tail.dump() + "\n";
  flush();
  return kPass;
}

int report_exit(const virolab::ClassReport& report) {
  for (const auto& eq : report.equations)
    for (const auto& pv : eq.verdicts)
      if (pv.verdict == virolab::Verdict::unequal) return kFail;
  if (report.inconclusive()) return kInconclusive;
  return kPass;
}

int cmd_verify(const std::string& forged_file, const std::string& corpus_dir,
               const std::string& out, std::uint64_t fuel, std::size_t probes_cap) {
  virolab::ForgedFile file =
      virolab::forged_from_json(read_json_file(forged_file));
  virolab::Forged model = model_for(file);
  std::vector<virolab::Env> probes = load_corpus(corpus_dir, probes_cap);
  virolab::ClassReport report =
      virolab::verify_class(model, probes, virolab::Fuel{fuel});

  std::optional<virolab::TraitReport> traits;
  std::string note;
  try {
    traits = virolab::classify_traits(model.v, probes, virolab::Fuel{fuel});
  } catch (const virolab::InsufficientProbes& ex) {
    note = ex.what();
  }
  write_json_file(out, virolab::class_report_to_json(report, traits, note));
  return report_exit(report);
}

int cmd_classify(const std::string& forged_file, const std::string& corpus_dir,
                 const std::string& out, std::uint64_t fuel,
                 std::size_t probes_cap) {
  virolab::ForgedFile file =
      virolab::forged_from_json(read_json_file(forged_file));
  std::vector<virolab::Env> probes = load_corpus(corpus_dir, probes_cap);
  ordered_json j;
  j["class"] = virolab::virus_class_name(file.cls);
  try {
    virolab::TraitReport t =
        virolab::classify_traits(file.v, probes, virolab::Fuel{fuel});
    j["traits"] = virolab::trait_report_to_json(t);
    write_json_file(out, j);
    return kPass;
  } catch (const virolab::InsufficientProbes& ex) {
    j["traits"] = nullptr;
    j["traits_note"] = ex.what();
    write_json_file(out, j);
    return kInconclusive;
  }
}

int cmd_fix(const std::string& program_file, const std::string& out) {
  ordered_json in = read_json_file(program_file);
  if (!in.contains("code") || !in["code"].is_string())
    throw virolab::BadInput("fix input needs a hex \"code\" field");
  virolab::Word code;
  try {
    code = virolab::from_hex(in["code"].get<std::string>());
  } catch (const std::invalid_argument&) {
    throw virolab::BadInput("\"code\" is not a hex word");
  }
  virolab::FixedPoint fp;
  try {
    fp = virolab::kleene_fix(code);
  } catch (const virolab::SyntaxError& ex) {
    throw virolab::BadInput(std::string("code does not parse: ") + ex.what());
  }
  ordered_json j;
  j["e"] = virolab::to_hex(fp.e);
  j["size"] = fp.e.size();
  j["transcript"] = ordered_json::array();
  for (const auto& step : fp.transcript)
    j["transcript"].push_back(
        {{"label", step.label}, {"text", virolab::to_hex(step.text)}});
  write_json_file(out, j);
  return kPass;
}

int cmd_demo_bonfante(std::uint64_t fuel, const std::string& out) {
  virolab::BonfanteReport report = virolab::bonfante_demo(virolab::Fuel{fuel});
  ordered_json j = virolab::bonfante_to_json(report);
  std::cout << j.dump(2) << "\n";
  if (!out.empty()) write_json_file(out, j);
  return report.pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sealed workbench for abstract computer virology"};
  app.require_subcommand(1);

  std::uint64_t fuel = 10'000'000;
  std::uint64_t seed = 0;
  std::size_t probes = 20;
  std::string out;
  std::string input;
  std::string corpus;

  auto* build = app.add_subcommand("build", "forge a virus from a blueprint");
  build->add_option("blueprint", input, "blueprint JSON file")->required();
  build->add_option("--out", out, "output artifact path");
  build->add_option("--fuel", fuel, "fuel budget");
  build->add_option("--seed", seed, "probe corpus seed");

  auto* run = app.add_subcommand("run", "run generations inside a scenario");
  run->add_option("scenario", input, "scenario JSON file")->required();
  run->add_option("--out", out, "output trace path");
  run->add_option("--fuel", fuel, "fuel budget override (unused; scenario rules)");
  run->add_option("--seed", seed, "probe corpus seed");

  auto* verify = app.add_subcommand("verify", "replay class equations on probes");
  verify->add_option("forged", input, "forged artifact JSON file")->required();
  verify->add_option("corpus", corpus, "directory of environment JSON files")
      ->required();
  verify->add_option("--out", out, "output report path");
  verify->add_option("--fuel", fuel, "fuel budget");
  verify->add_option("--seed", seed, "probe corpus seed");
  verify->add_option("--probes", probes, "probe count cap");

  auto* classify = app.add_subcommand("classify", "derive traits from behavior");
  classify->add_option("forged", input, "forged artifact JSON file")->required();
  classify->add_option("corpus", corpus, "directory of environment JSON files")
      ->required();
  classify->add_option("--out", out, "output traits path");
  classify->add_option("--fuel", fuel, "fuel budget");
  classify->add_option("--seed", seed, "probe corpus seed");
  classify->add_option("--probes", probes, "probe count cap");

  auto* fix = app.add_subcommand("fix", "close a program over its own text");
  fix->add_option("program", input, "JSON file with a hex \"code\" field")
      ->required();
  fix->add_option("--out", out, "output path");

  auto* demo = app.add_subcommand("demo-bonfante",
                                  "separate a virus from its infected forms");
  demo->add_option("--fuel", fuel, "fuel budget");
  demo->add_option("--out", out, "also write the report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed())
      return cmd_build(input, out.empty() ? "forged.json" : out);
    if (run->parsed()) return cmd_run(input, out.empty() ? "trace.jsonl" : out);
    if (verify->parsed())
      return cmd_verify(input, corpus, out.empty() ? "report.json" : out, fuel,
                        probes);
    if (classify->parsed())
      return cmd_classify(input, corpus, out.empty() ? "traits.json" : out,
                          fuel, probes);
    if (fix->parsed()) return cmd_fix(input, out.empty() ? "fixed.json" : out);
    if (demo->parsed()) return cmd_demo_bonfante(fuel, out);
  } catch (const virolab::BadInput& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kBadInput;
  } catch (const virolab::InvalidBlueprint& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kBadInput;
  } catch (const virolab::SyntaxError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kBadInput;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
