// Command-line front end for the efsolve library.
//
//   efsolve validate <game>
//   efsolve solve    --game <game> --concept <id> [--levels K] ...
//   efsolve compare  --game <game> --concepts <id,id,...> [--levels K] ...
//   efsolve classify --game <game> --observations <file> --concepts ...
//   efsolve list-games
//   efsolve export-corpus <dir>
//
// <game> is a corpus id or a path to a game file. Exit status: 0 on
// success, 1 on domain errors (unknown game, malformed file, invalid game),
// 2 on usage errors.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11/CLI11.hpp"
#include "efsolve/efsolve.hpp"

namespace {

using efsolve::ConceptSpec;
using efsolve::GameModel;
using efsolve::GameTree;
using efsolve::Json;
using efsolve::LevelSolution;

// Raised for argument combinations CLI11 cannot check by itself.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool IsFile(const std::string& path) {
  std::error_code ec;
  return std::filesystem::is_regular_file(path, ec);
}

GameTree LoadGame(const std::string& source) {
  if (efsolve::IsCorpusGame(source)) return efsolve::LoadCorpusGame(source);
  if (IsFile(source)) return GameTree::FromJsonText(ReadFile(source));
  throw efsolve::UnknownGameError("unknown game '" + source + "'");
}

struct SolveOptions {
  std::string game;
  std::vector<std::string> concepts;
  std::string beliefs = "uniform";
  std::string delta;
  std::string variant = "standard";
  int levels = 5;
  std::string mode;
  std::string format = "table";
  bool emit_witness = false;
};

efsolve::Mode ResolveMode(const std::string& flag) {
  if (!flag.empty()) return efsolve::ParseMode(flag);
  if (const char* env = std::getenv("EFSOLVE_MODE"); env && *env) {
    return efsolve::ParseMode(env);
  }
  return efsolve::Mode::kLocal;
}

ConceptSpec MakeSpec(const GameModel& model, const SolveOptions& opts,
                     const std::string& id) {
  ConceptSpec spec;
  spec.id = id;
  const efsolve::ConceptInfo& info = efsolve::FindConcept(id);
  if (opts.beliefs != "uniform") {
    if (!info.uses_beliefs) {
      throw UsageError("--beliefs applies only to level-k concepts");
    }
    efsolve::LoadBeliefs(model, Json::parse(ReadFile(opts.beliefs)), &spec);
  }
  if (id == "delta-rationalizability") {
    if (opts.delta.empty()) {
      throw UsageError("delta-rationalizability requires --delta");
    }
    if (opts.delta == "uniform") {
      spec.delta = efsolve::UniformDelta(model);
      spec.delta_name = "uniform";
    } else if (opts.delta == "unrestricted") {
      spec.delta = efsolve::UnrestrictedDelta(model);
      spec.delta_name = "unrestricted";
    } else {
      spec.delta = efsolve::LoadDelta(model, Json::parse(ReadFile(opts.delta)));
      spec.delta_name = "file";
    }
    spec.variant = efsolve::ParseVariant(opts.variant);
  }
  return spec;
}

std::vector<LevelSolution> SolveAll(const GameModel& model,
                                    const SolveOptions& opts) {
  bool has_delta = false;
  for (const std::string& id : opts.concepts) {
    efsolve::FindConcept(id);
    has_delta = has_delta || id == "delta-rationalizability";
  }
  if (!opts.delta.empty() && !has_delta) {
    throw UsageError("--delta applies only to delta-rationalizability");
  }
  if (opts.levels < 1) throw UsageError("--levels must be at least 1");
  efsolve::SolverOptions options;
  options.mode = ResolveMode(opts.mode);
  options.record_witnesses = opts.emit_witness;
  std::vector<LevelSolution> out;
  for (const std::string& id : opts.concepts) {
    out.push_back(efsolve::RunConcept(model, MakeSpec(model, opts, id),
                                      opts.levels, options));
  }
  return out;
}

void PrintSolutions(const GameModel& model,
                    const std::vector<LevelSolution>& solutions,
                    const std::string& format) {
  if (format == "json") {
    std::cout << efsolve::RenderJson(model, solutions);
  } else if (format == "csv") {
    std::cout << efsolve::RenderCsv(model, solutions);
  } else {
    std::cout << efsolve::RenderTable(model, solutions);
  }
}

int RunValidate(const std::string& source) {
  GameTree tree = LoadGame(source);
  const efsolve::ValidationReport& report = tree.validation();
  if (report.ok()) {
    std::cout << "valid: " << tree.name() << " (" << tree.num_players()
              << " players, " << tree.nodes().size() << " nodes, "
              << tree.info_sets().size() << " information sets)\n";
    return 0;
  }
  for (const efsolve::Violation& v : report.violations) {
    std::cout << v.kind << ": " << v.message << "\n";
  }
  return 1;
}

int RunSolve(const SolveOptions& opts) {
  GameTree tree = LoadGame(opts.game);
  tree.RequireValid();
  GameModel model(tree);
  PrintSolutions(model, SolveAll(model, opts), opts.format);
  return 0;
}

int RunClassify(const SolveOptions& opts, const std::string& observations,
                int decimals) {
  GameTree tree = LoadGame(opts.game);
  tree.RequireValid();
  GameModel model(tree);
  std::string text = IsFile(observations)
                         ? ReadFile(observations)
                         : efsolve::CorpusObservations(observations);
  efsolve::ObservationSet data =
      efsolve::LoadObservations(model, text, opts.game);
  efsolve::ConsistencyTable table =
      efsolve::ClassifyAll(model, data, SolveAll(model, opts));
  if (opts.format == "json") {
    std::cout << efsolve::ConsistencyJson(model, table, decimals).dump(2)
              << "\n";
  } else if (opts.format == "csv") {
    std::cout << efsolve::ConsistencyCsv(model, table);
  } else {
    std::cout << efsolve::RenderConsistencyTable(model, table, decimals);
  }
  return 0;
}

int RunListGames() {
  std::vector<std::vector<std::string>> rows = {{"id", "name", "caption"}};
  for (const efsolve::CorpusEntry& e : efsolve::CorpusList()) {
    rows.push_back({e.id, e.name, e.caption});
  }
  std::cout << efsolve::RenderAligned(rows);
  return 0;
}

void AddSolveFlags(CLI::App* cmd, SolveOptions* opts) {
  cmd->add_option("--game", opts->game, "corpus id or game file")->required();
  cmd->add_option("--beliefs", opts->beliefs,
                  "first-level beliefs: uniform or a beliefs file")
      ->capture_default_str();
  cmd->add_option("--delta", opts->delta,
                  "Delta restriction: uniform, unrestricted or a file");
  cmd->add_option("--variant", opts->variant,
                  "Delta-rationalizability variant")
      ->check(CLI::IsMember({"standard", "modified"}))
      ->capture_default_str();
  cmd->add_option("--levels", opts->levels, "number of levels K")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--mode", opts->mode,
                  "belief-system feasibility mode (default: $EFSOLVE_MODE or "
                  "local)")
      ->check(CLI::IsMember({"local", "strict"}));
  cmd->add_option("--format", opts->format, "output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  cmd->add_flag("--emit-witness", opts->emit_witness,
                "include justifying beliefs in JSON output");
}

std::string ConceptList() {
  std::string out;
  for (const efsolve::ConceptInfo& c : efsolve::kConcepts) {
    if (!out.empty()) out += ", ";
    out += c.id;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level-indexed solution concepts for extensive-form games"};
  app.require_subcommand(1);

  std::string validate_source;
  auto* validate = app.add_subcommand("validate", "check a game file");
  validate->add_option("game", validate_source, "corpus id or game file")
      ->required();

  SolveOptions solve_opts;
  std::string concept_id;
  auto* solve = app.add_subcommand("solve", "solve one concept level by level");
  AddSolveFlags(solve, &solve_opts);
  solve->add_option("--concept", concept_id, "one of: " + ConceptList())
      ->required();

  SolveOptions compare_opts;
  auto* compare =
      app.add_subcommand("compare", "solve several concepts side by side");
  AddSolveFlags(compare, &compare_opts);
  compare->add_option("--concepts", compare_opts.concepts,
                      "comma-separated concept ids")
      ->required()
      ->delimiter(',');

  SolveOptions classify_opts;
  std::string observations;
  int decimals = 0;
  auto* classify = app.add_subcommand(
      "classify", "share of observed choices consistent with each concept");
  AddSolveFlags(classify, &classify_opts);
  classify->add_option("--concepts", classify_opts.concepts,
                       "comma-separated concept ids")
      ->required()
      ->delimiter(',');
  classify->add_option("--observations", observations,
                       "observation CSV file or corpus observation file name")
      ->required();
  classify->add_option("--decimals", decimals, "decimals in percentages")
      ->check(CLI::Range(0, 10))
      ->capture_default_str();

  app.add_subcommand("list-games", "list built-in games");

  std::string export_dir;
  auto* export_corpus =
      app.add_subcommand("export-corpus", "write the built-in corpus files");
  export_corpus->add_option("dir", export_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return RunValidate(validate_source);
    if (solve->parsed()) {
      solve_opts.concepts = {concept_id};
      return RunSolve(solve_opts);
    }
    if (compare->parsed()) return RunSolve(compare_opts);
    if (classify->parsed()) {
      return RunClassify(classify_opts, observations, decimals);
    }
    if (app.got_subcommand("list-games")) return RunListGames();
    if (export_corpus->parsed()) {
      int n = efsolve::ExportCorpus(export_dir);
      std::cout << "wrote " << n << " files to " << export_dir << "\n";
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
