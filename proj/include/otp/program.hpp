#pragma once

// Randomized programs f : X × R → Y over fixed-width integer encodings,
// truth-table files, a few toy programs, and the brute-force min-entropy
// profile τ_x = -log2 max_y Pr_r[f(x; r) = y].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "otp/errors.hpp"

namespace otp::program {

using Codeword = std::uint64_t;

inline constexpr std::size_t kMaxTableBits = 24;
inline constexpr std::size_t kMaxEntropyRandomBits = 20;

struct ProgramSpec {
  std::string name;
  std::size_t x_bits = 1;   // log2 |X|
  std::size_t r_bits = 1;   // log2 |R|
  std::size_t y_width = 1;  // |Y| = 2^y_width; 0 means a single output value
  std::function<Codeword(std::uint64_t x, std::uint64_t r)> body;

  std::uint64_t x_count() const { return std::uint64_t{1} << x_bits; }
  std::uint64_t r_count() const { return std::uint64_t{1} << r_bits; }
  std::uint64_t y_count() const { return std::uint64_t{1} << y_width; }

  void validate() const {
    if (x_bits == 0 || x_bits > 32) throw ParameterError("program x_bits must be in [1, 32]");
    if (r_bits == 0 || r_bits > 64) throw ParameterError("program r_bits must be in [1, 64]");
    if (y_width > 62) throw ParameterError("program y_width too large");
    if (!body) throw ParameterError("program has no body");
  }

  Codeword operator()(std::uint64_t x, std::uint64_t r) const {
    if (x >= x_count() || (r_bits < 64 && r >= r_count())) throw DomainError("program input outside X × R");
    const Codeword y = body(x, r);
    if (y >= y_count()) throw DomainError("program '" + name + "' produced a codeword outside Y");
    return y;
  }
};

inline ProgramSpec from_table(std::string name, std::size_t x_bits, std::size_t r_bits, std::size_t y_width,
                              std::vector<Codeword> table) {
  if (x_bits + r_bits > kMaxTableBits) throw CapacityError("truth table too large");
  if (table.size() != (std::size_t{1} << (x_bits + r_bits))) {
    throw FormatError("truth table has " + std::to_string(table.size()) + " entries, expected 2^" +
                      std::to_string(x_bits + r_bits));
  }
  for (auto y : table) {
    if (y >= (Codeword{1} << y_width)) throw FormatError("truth table codeword " + std::to_string(y) + " exceeds y_width");
  }
  auto shared = std::make_shared<const std::vector<Codeword>>(std::move(table));
  ProgramSpec f{std::move(name), x_bits, r_bits, y_width,
                [shared, r_bits](std::uint64_t x, std::uint64_t r) { return (*shared)[(x << r_bits) | r]; }};
  f.validate();
  return f;
}

// Row-major (x, r) table of every output.
inline std::vector<Codeword> truth_table(const ProgramSpec& f) {
  if (f.x_bits + f.r_bits > kMaxTableBits) throw CapacityError("program too large to tabulate");
  std::vector<Codeword> t;
  t.reserve(std::size_t{1} << (f.x_bits + f.r_bits));
  for (std::uint64_t x = 0; x < f.x_count(); ++x) {
    for (std::uint64_t r = 0; r < f.r_count(); ++r) t.push_back(f(x, r));
  }
  return t;
}

// Text format: '#' comments, then "x_bits r_bits y_width", then
// 2^{x_bits + r_bits} decimal codewords in row-major (x, r) order.
inline ProgramSpec load_truth_table(std::istream& in, std::string name = "table") {
  std::stringstream body;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    body << line << '\n';
  }
  std::size_t x_bits = 0, r_bits = 0, y_width = 0;
  if (!(body >> x_bits >> r_bits >> y_width)) throw FormatError("truth table header must be 'x_bits r_bits y_width'");
  if (x_bits == 0 || r_bits == 0 || x_bits + r_bits > kMaxTableBits) throw FormatError("truth table dimensions out of range");
  std::vector<Codeword> table;
  Codeword y = 0;
  while (body >> y) table.push_back(y);
  if (!body.eof()) throw FormatError("truth table contains a non-numeric entry");
  return from_table(std::move(name), x_bits, r_bits, y_width, std::move(table));
}

inline ProgramSpec load_truth_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open truth table '" + path + "'");
  auto slash = path.find_last_of('/');
  std::string stem = path.substr(slash == std::string::npos ? 0 : slash + 1);
  if (auto dot = stem.rfind('.'); dot != std::string::npos) stem.erase(dot);
  return load_truth_table(in, stem);
}

inline void save_truth_table(std::ostream& out, const ProgramSpec& f) {
  out << "# " << f.name << '\n' << f.x_bits << ' ' << f.r_bits << ' ' << f.y_width << '\n';
  const auto t = truth_table(f);
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << t[i] << (((i + 1) % f.r_count() == 0) ? '\n' : ' ');
  }
}

// Toy programs.

inline ProgramSpec constant_program(std::size_t x_bits, std::size_t r_bits, std::size_t y_width = 1,
                                    Codeword value = 0) {
  ProgramSpec f{"constant", x_bits, r_bits, y_width, [value](std::uint64_t, std::uint64_t) { return value; }};
  f.validate();
  return f;
}

// f(x; r) = r.
inline ProgramSpec identity_on_r(std::size_t x_bits, std::size_t r_bits) {
  ProgramSpec f{"identity_r", x_bits, r_bits, r_bits, [](std::uint64_t, std::uint64_t r) { return r; }};
  f.validate();
  return f;
}

// f(x; r) = x, ignoring the randomness.
inline ProgramSpec identity_on_x(std::size_t x_bits, std::size_t r_bits) {
  ProgramSpec f{"identity_x", x_bits, r_bits, x_bits, [](std::uint64_t x, std::uint64_t) { return x; }};
  f.validate();
  return f;
}

// f_k(x; r) = (x bit 0, r mod 2^k), packed as bit0 | (r mod 2^k) << 1.
// Each x sees 2^k equally likely outputs, so τ = k.
inline ProgramSpec prefix_tail_program(std::size_t x_bits, std::size_t r_bits, std::size_t k) {
  if (k > r_bits) throw ParameterError("tail width exceeds r_bits");
  const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  ProgramSpec f{"prefix_tail_k" + std::to_string(k), x_bits, r_bits, 1 + k,
                [mask](std::uint64_t x, std::uint64_t r) { return (x & 1u) | ((r & mask) << 1); }};
  f.validate();
  return f;
}

struct EntropyProfile {
  std::vector<double> per_x;  // τ_x in bits
  double tau = 0.0;           // min over x
};

inline EntropyProfile min_entropy(const ProgramSpec& f) {
  if (f.r_bits > kMaxEntropyRandomBits) throw CapacityError("min-entropy needs r_bits <= 20");
  if (f.x_bits > kMaxEntropyRandomBits) throw CapacityError("min-entropy needs x_bits <= 20");
  EntropyProfile prof;
  std::unordered_map<Codeword, std::uint64_t> counts;
  for (std::uint64_t x = 0; x < f.x_count(); ++x) {
    counts.clear();
    std::uint64_t best = 0;
    for (std::uint64_t r = 0; r < f.r_count(); ++r) best = std::max(best, ++counts[f(x, r)]);
    // Exact for power-of-two ratios; guards -0.0 when one output has all the mass.
    const double tau_x = static_cast<double>(f.r_bits) - std::log2(static_cast<double>(best));
    prof.per_x.push_back(tau_x == 0.0 ? 0.0 : tau_x);
  }
  prof.tau = *std::min_element(prof.per_x.begin(), prof.per_x.end());
  return prof;
}

}  // namespace otp::program
