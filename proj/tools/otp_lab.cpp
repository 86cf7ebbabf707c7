// otp_lab: demos, game sweeps, entropy profiles and reports for the
// one-time program scheme.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "otp/experiment.hpp"
#include "otp/scheme.hpp"

namespace {

using namespace otp;
using experiment::ExperimentConfig;

int cmd_demo(const ExperimentConfig& c) {
  c.validate();
  const auto f = experiment::resolve_program(c.program, c.ell);
  Rng rng(c.seed);
  auto kp = scheme::otp_keygen(c.lambda, f, rng);
  std::cout << "keygen: lambda=" << c.lambda << " ell=" << kp.sk.ell() << " program=" << f.name
            << " |Y|=" << f.y_count() << '\n';
  for (std::size_t i = 0; i < kp.sk.ell(); ++i) {
    std::cout << "  A_" << i << " basis:";
    for (const auto& row : kp.sk.subspaces[i].rows()) std::cout << ' ' << row;
    std::cout << '\n';
  }
  if (c.representation() == auth::TokenRepresentation::StateVector) {
    for (std::size_t i = 0; i < kp.sk.ell(); ++i) {
      const auto& a = kp.sk.subspaces[i];
      const bool ok = qsim::apply_hadamard_all(qsim::prepare_subspace_state(a))
                          .approx_equal(qsim::prepare_subspace_state(gf2::orthogonal_complement(a)));
      std::cout << "  H^" << c.lambda << "|A_" << i << "> = |A_" << i << "^perp>: "
                << (ok ? "A⊥ verified" : "MISMATCH") << '\n';
      if (!ok) return 2;
    }
  }
  auto token = scheme::otp_token_gen(kp.sk, c.representation());
  std::cout << "token: " << auth::to_string(token.representation()) << ", " << token.ell() << " register(s) of "
            << token.lambda() << " qubits\n";
  const std::uint64_t x = f.x_count() - 1;
  const auto ev = scheme::otp_token_eval_traced(x, token, kp.handle, rng);
  std::cout << "eval: x=" << ev.signature.message << " z=" << ev.signature.concatenated_tags()
            << " y=" << scheme::to_string(ev.y) << '\n';
  try {
    scheme::otp_token_eval(0, token, kp.handle, rng);
    std::cout << "second eval: unexpectedly succeeded\n";
    return 2;
  } catch (const OneShotViolation& e) {
    std::cout << "second eval: one-shot violation (" << e.what() << ")\n";
  }
  std::cout << "handle queries: " << kp.handle.query_count() << '\n';
  return 0;
}

int cmd_game(const ExperimentConfig& c) {
  const auto result = experiment::run_sweep(c);
  experiment::write_sweep(c, result);
  std::cout << experiment::render_csv(c, result.rows);
  std::cout << "wrote " << (std::filesystem::path(c.out) / (c.game + ".csv")).string() << " and "
            << (std::filesystem::path(c.out) / (c.game + "_winners.json")).string() << '\n';
  return 0;
}

int cmd_entropy(const ExperimentConfig& c) {
  const auto f = experiment::resolve_program(c.program, c.ell);
  const auto prof = program::min_entropy(f);
  std::ostringstream csv;
  csv << "# config: " << c.to_json().dump() << '\n' << "x,tau_x\n";
  std::cout << "program " << f.name << ": x_bits=" << f.x_bits << " r_bits=" << f.r_bits << " y_width=" << f.y_width
            << '\n';
  for (std::size_t x = 0; x < prof.per_x.size(); ++x) {
    std::cout << "  tau_" << x << " = " << experiment::format_double(prof.per_x[x]) << '\n';
    csv << x << ',' << experiment::format_double(prof.per_x[x]) << '\n';
  }
  std::cout << "tau = " << experiment::format_double(prof.tau) << '\n';
  if (prof.tau == 0.0) {
    std::cout << "warning: tau = 0, so f(x; r) is deterministic for some x and the min-entropy hypothesis fails\n";
  }
  if (!c.out.empty()) experiment::write_atomic(std::filesystem::path(c.out) / (f.name + "_entropy.csv"), csv.str());
  return 0;
}

// Markdown summary of every sweep CSV found under --out.
int cmd_report(const ExperimentConfig& c) {
  const std::filesystem::path dir(c.out);
  if (!std::filesystem::is_directory(dir)) throw FormatError("no results directory '" + c.out + "'");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() == ".csv" && e.path().stem().string().find("_entropy") == std::string::npos) {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::ostringstream md;
  md << "# otp_lab report\n";
  for (const auto& p : files) {
    std::ifstream in(p);
    std::string line;
    md << "\n## " << p.filename().string() << "\n\n";
    bool header = true;
    while (std::getline(in, line)) {
      if (line.rfind("# config: ", 0) == 0) {
        md << "config: `" << line.substr(10) << "`\n\n";
        continue;
      }
      std::string row = "| ";
      bool quoted = false;
      for (char ch : line) {
        if (ch == '"') {
          quoted = !quoted;
        } else if (ch == ',' && !quoted) {
          row += " | ";
        } else {
          row += ch;
        }
      }
      md << row << " |\n";
      if (header) {
        md << "|---|---|---|---|---|---|---|\n";
        header = false;
      }
    }
  }
  std::cout << md.str();
  experiment::write_atomic(dir / "report.md", md.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-time program lab"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed, trials;
  std::optional<std::size_t> lambda, ell, q;
  std::optional<std::string> out, mode, game, adversary, prog;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "experiment seed");
  app.add_option("--lambda", lambda, "security parameter (even)");
  app.add_option("--ell", ell, "message length");
  app.add_option("--trials", trials, "trials per grid point");
  app.add_option("--q", q, "oracle query budget");
  app.add_option("--out", out, "output directory");
  app.add_option("--mode", mode, "token representation")->check(CLI::IsMember({"classical", "statevector"}));
  app.add_option("--game", game, "game id");
  app.add_option("--adversary", adversary, "adversary id");
  app.add_option("--program", prog, "named program or truth-table path");
  auto* demo = app.add_subcommand("demo", "keygen, token, one evaluation, refused second evaluation");
  auto* gamec = app.add_subcommand("game", "run a game sweep and write CSV + JSON artifacts");
  auto* entropy = app.add_subcommand("entropy", "min-entropy profile of a program");
  auto* report = app.add_subcommand("report", "summarize result CSVs as markdown");
  for (auto* sub : {demo, gamec, entropy, report}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  ExperimentConfig c;
  try {
    if (!config_path.empty()) c = ExperimentConfig::load(config_path);
    if (seed) c.seed = *seed;
    if (lambda) {
      c.lambda = *lambda;
      c.lambdas.clear();
    }
    if (ell) c.ell = *ell;
    if (trials) c.trials = *trials;
    if (q) c.q = *q;
    if (out) c.out = *out;
    if (mode) c.mode = *mode;
    if (game) c.game = *game;
    if (adversary) c.adversary = *adversary;
    if (prog) c.program = *prog;
    c.command = app.get_subcommands().front()->get_name();
    c.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (c.command == "demo") return cmd_demo(c);
    if (c.command == "game") return cmd_game(c);
    if (c.command == "entropy") return cmd_entropy(c);
    return cmd_report(c);
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const FormatError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return 2;
  }
}
