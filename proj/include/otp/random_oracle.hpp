#pragma once

// The hash H : X × {0,1}^m → {0,1}^n guarding program randomness. Either a
// lazily sampled random function (memo table + seeded stream) or a keyed
// pseudorandom function (BLAKE2b keyed hash) over the same domain.

#include <sodium.h>

#include <array>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "otp/errors.hpp"
#include "otp/gf2.hpp"
#include "otp/rng.hpp"

namespace otp::oracle {

struct OracleSpec {
  std::size_t x_bits = 1;    // log2 |X|
  std::size_t tag_bits = 1;  // m
  std::size_t out_bits = 1;  // n = log2 |R|

  void validate() const {
    if (x_bits == 0 || x_bits > 63) throw ParameterError("oracle x_bits must be in [1, 63]");
    if (tag_bits == 0) throw ParameterError("oracle tag length must be positive");
    if (out_bits == 0 || out_bits > 64) throw ParameterError("oracle output bits must be in [1, 64]");
  }

  friend bool operator==(const OracleSpec&, const OracleSpec&) = default;
};

enum class OracleMode { LazyRandom, KeyedDeterministic };

class RandomOracle {
 public:
  RandomOracle(OracleSpec spec, OracleMode mode, std::uint64_t seed)
      : spec_(spec), mode_(mode), rng_(seed) {
    spec_.validate();
    if (mode_ == OracleMode::KeyedDeterministic) {
      if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
      std::array<unsigned char, 8> seed_bytes{};
      for (std::size_t i = 0; i < 8; ++i) seed_bytes[i] = static_cast<unsigned char>(seed >> (8 * i));
      crypto_generichash(key_.data(), key_.size(), seed_bytes.data(), seed_bytes.size(), nullptr, 0);
    }
  }

  RandomOracle(const RandomOracle&) = delete;
  RandomOracle& operator=(const RandomOracle&) = delete;

  const OracleSpec& spec() const { return spec_; }
  OracleMode mode() const { return mode_; }

  std::uint64_t query_value(std::uint64_t x, const gf2::BitVector& z) {
    check_domain(x, z);
    queries_.fetch_add(1, std::memory_order_relaxed);
    return mode_ == OracleMode::LazyRandom ? lazy_lookup(x, z) : keyed_eval(x, z);
  }

  gf2::BitVector query(std::uint64_t x, const gf2::BitVector& z) {
    return gf2::BitVector::from_uint(query_value(x, z), spec_.out_bits);
  }

  std::uint64_t query_count() const { return queries_.load(std::memory_order_relaxed); }

 private:
  struct Key {
    std::uint64_t x;
    gf2::BitVector z;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return gf2::BitVectorHash{}(k.z) ^ mix64(k.x); }
  };

  void check_domain(std::uint64_t x, const gf2::BitVector& z) const {
    if ((x >> spec_.x_bits) != 0) throw DomainError("oracle input x outside X");
    if (z.size() != spec_.tag_bits) {
      throw DomainError("oracle tag has " + std::to_string(z.size()) + " bits, expected " +
                        std::to_string(spec_.tag_bits));
    }
  }

  std::uint64_t out_mask() const {
    return spec_.out_bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << spec_.out_bits) - 1;
  }

  std::uint64_t lazy_lookup(std::uint64_t x, const gf2::BitVector& z) {
    Key key{x, z};
    {
      std::shared_lock lock(mutex_);
      auto it = table_.find(key);
      if (it != table_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = table_.try_emplace(std::move(key), 0);
    if (inserted) it->second = rng_() & out_mask();
    return it->second;
  }

  std::uint64_t keyed_eval(std::uint64_t x, const gf2::BitVector& z) const {
    std::vector<unsigned char> msg;
    auto put = [&msg](std::uint64_t w) {
      for (std::size_t i = 0; i < 8; ++i) msg.push_back(static_cast<unsigned char>(w >> (8 * i)));
    };
    put(x);
    put(z.size());
    for (auto w : z.words()) put(w);
    std::array<unsigned char, 8> out{};
    crypto_generichash(out.data(), out.size(), msg.data(), msg.size(), key_.data(), key_.size());
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) v |= std::uint64_t{out[i]} << (8 * i);
    return v & out_mask();
  }

  OracleSpec spec_;
  OracleMode mode_;
  Rng rng_;
  std::array<unsigned char, crypto_generichash_KEYBYTES> key_{};
  std::unordered_map<Key, std::uint64_t, KeyHash> table_;
  mutable std::shared_mutex mutex_;
  std::atomic<std::uint64_t> queries_{0};
};

}  // namespace otp::oracle
