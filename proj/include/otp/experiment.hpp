#pragma once

// Experiment configuration, named programs, and artifact writers for the
// otp_lab tool. A config is a JSON object; command-line flags override it.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "otp/errors.hpp"
#include "otp/games.hpp"
#include "otp/program.hpp"

namespace otp::experiment {

using nlohmann::json;

struct ExperimentConfig {
  std::string command = "demo";
  std::size_t lambda = 4;
  std::size_t ell = 1;
  std::vector<std::size_t> lambdas;  // sweep grid; empty means {lambda}
  std::string program = "identity_x";
  std::string mode = "classical";
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t q = 0;
  std::string out = "results";
  std::string game = "forgery";
  std::string adversary;
  std::vector<std::size_t> tail_widths{0, 1, 2, 3, 4};
  std::size_t collapse_x_bits = 3;
  std::size_t collapse_r_bits = 6;
  std::size_t archive_winners = 10;

  std::vector<std::size_t> lambda_grid() const { return lambdas.empty() ? std::vector<std::size_t>{lambda} : lambdas; }

  std::string default_adversary() const {
    if (!adversary.empty()) return adversary;
    if (game == "forgery") return "honest_plus_random";
    if (game == "bbotp") return "classical_double_eval";
    if (game == "rewind") return "rewind";
    return "optimal_q1";
  }

  void validate() const {
    for (auto l : lambda_grid()) {
      if (l < 2 || l % 2 != 0) throw ParameterError("lambda must be even and >= 2, got " + std::to_string(l));
    }
    if (ell == 0) throw ParameterError("ell must be positive");
    if (trials == 0) throw ParameterError("trials must be positive");
    if (mode != "classical" && mode != "statevector") throw ParameterError("mode must be classical or statevector");
    if (game != "forgery" && game != "bbotp" && game != "rewind" && game != "collapse") {
      throw ParameterError("unknown game '" + game + "'");
    }
    if (game == "collapse" && tail_widths.empty()) throw ParameterError("collapse sweep needs tail_widths");
  }

  auth::TokenRepresentation representation() const {
    return mode == "statevector" ? auth::TokenRepresentation::StateVector : auth::TokenRepresentation::ClassicalSim;
  }

  json to_json() const {
    return json{{"command", command},
                {"lambda", lambda},
                {"ell", ell},
                {"lambdas", lambdas},
                {"program", program},
                {"mode", mode},
                {"trials", trials},
                {"seed", seed},
                {"q", q},
                {"out", out},
                {"game", game},
                {"adversary", adversary},
                {"tail_widths", tail_widths},
                {"collapse_x_bits", collapse_x_bits},
                {"collapse_r_bits", collapse_r_bits},
                {"archive_winners", archive_winners}};
  }

  static ExperimentConfig from_json(const json& j) {
    if (!j.is_object()) throw FormatError("config must be a JSON object");
    ExperimentConfig c;
    const auto known = c.to_json();
    for (const auto& [key, _] : j.items()) {
      if (!known.contains(key)) throw FormatError("unknown config key '" + key + "'");
    }
    try {
      auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) j.at(key).get_to(field);
      };
      get("command", c.command);
      get("lambda", c.lambda);
      get("ell", c.ell);
      get("lambdas", c.lambdas);
      get("program", c.program);
      get("mode", c.mode);
      get("trials", c.trials);
      get("seed", c.seed);
      get("q", c.q);
      get("out", c.out);
      get("game", c.game);
      get("adversary", c.adversary);
      get("tail_widths", c.tail_widths);
      get("collapse_x_bits", c.collapse_x_bits);
      get("collapse_r_bits", c.collapse_r_bits);
      get("archive_winners", c.archive_winners);
    } catch (const json::exception& e) {
      throw FormatError(std::string("config: ") + e.what());
    }
    return c;
  }

  static ExperimentConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config '" + path + "'");
    try {
      return from_json(json::parse(in));
    } catch (const json::parse_error& e) {
      throw FormatError(std::string("config parse error: ") + e.what());
    }
  }
};

// Named toy program with ℓ input bits, or a truth-table file path.
inline program::ProgramSpec resolve_program(const std::string& name, std::size_t ell) {
  if (name == "identity_x") return program::identity_on_x(ell, 1);
  if (name == "identity_r") return program::identity_on_r(ell, 4);
  if (name == "constant") return program::constant_program(ell, 1);
  if (name.rfind("prefix_tail", 0) == 0) {
    std::size_t k = 2;
    if (auto colon = name.find(':'); colon != std::string::npos) k = std::stoul(name.substr(colon + 1));
    return program::prefix_tail_program(ell, 6, k);
  }
  if (std::filesystem::exists(name)) return program::load_truth_table_file(name);
  throw ParameterError("unknown program '" + name + "' (not a named program or readable file)");
}

inline std::vector<games::GridPoint> build_grid(const ExperimentConfig& c) {
  std::vector<games::GridPoint> grid;
  if (c.game == "collapse") {
    for (auto k : c.tail_widths) {
      games::GridPoint p;
      p.lambda = 0;
      p.ell = c.collapse_x_bits;
      p.adversary = "optimal_q1";
      p.q = 1;
      p.program = program::prefix_tail_program(c.collapse_x_bits, c.collapse_r_bits, k);
      grid.push_back(std::move(p));
    }
    return grid;
  }
  for (auto l : c.lambda_grid()) {
    games::GridPoint p;
    p.lambda = l;
    p.ell = c.ell;
    p.adversary = c.default_adversary();
    p.q = c.q;
    if (c.game != "forgery") p.program = resolve_program(c.program, c.ell);
    grid.push_back(std::move(p));
  }
  return grid;
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string render_csv(const ExperimentConfig& c, const std::vector<games::AdvantageEstimate>& rows) {
  std::ostringstream os;
  os << "# config: " << c.to_json().dump() << '\n';
  os << "game,params,trials,wins,estimate,ci_lo,ci_hi\n";
  for (const auto& e : rows) {
    os << e.game << ',' << csv_quote(e.params()) << ',' << e.trials << ',' << (e.wins ? std::to_string(*e.wins) : "")
       << ',' << format_double(e.estimate) << ',' << format_double(e.ci.lo) << ',' << format_double(e.ci.hi) << '\n';
  }
  return os.str();
}

inline json transcript_json(const games::GameTranscript& tr) {
  json events = json::array();
  for (const auto& e : tr.events) events.push_back({{"kind", e.kind}, {"detail", e.detail}});
  json outputs = json::array();
  for (const auto& y : tr.outputs) outputs.push_back(scheme::to_string(y));
  json j{{"game", tr.game},       {"adversary", tr.adversary}, {"seed", tr.seed},
         {"win", tr.win},         {"events", events},          {"outputs", outputs}};
  if (tr.forgery) {
    j["forgery"] = {{"x1", tr.forgery->first.message.to_string()},
                    {"z1", tr.forgery->first.concatenated_tags().to_string()},
                    {"x2", tr.forgery->second.message.to_string()},
                    {"z2", tr.forgery->second.concatenated_tags().to_string()}};
  }
  return j;
}

// Temp file + rename, so readers never see a partial artifact.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

struct SweepResult {
  std::vector<games::AdvantageEstimate> rows;
  std::vector<games::GameTranscript> winners;
};

inline SweepResult run_sweep(const ExperimentConfig& c) {
  c.validate();
  SweepResult r;
  const auto grid = build_grid(c);
  games::TranscriptSink sink = [&](const games::GameTranscript& tr) {
    if (tr.win && r.winners.size() < c.archive_winners) r.winners.push_back(tr);
  };
  r.rows = games::estimate_advantage_curve(c.game, grid, c.trials, c.seed, sink);
  return r;
}

inline void write_sweep(const ExperimentConfig& c, const SweepResult& r) {
  const std::filesystem::path dir(c.out);
  write_atomic(dir / (c.game + ".csv"), render_csv(c, r.rows));
  json archive{{"config", c.to_json()}, {"winners", json::array()}};
  for (const auto& tr : r.winners) archive["winners"].push_back(transcript_json(tr));
  write_atomic(dir / (c.game + "_winners.json"), archive.dump(2) + "\n");
}

}  // namespace otp::experiment
