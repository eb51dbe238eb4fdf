#pragma once

#include <cstdint>
#include <random>

namespace rrie {

/// Identifies one RNG stream: a master seed plus a stream index.
struct SeedRecord {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const SeedRecord&, const SeedRecord&) = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// A reproducible random stream. Streams for distinct (master, stream) pairs
/// are decorrelated by SplitMix64 mixing, so trials may run in any order or
/// in parallel and still draw identical numbers.
class Rng {
 public:
  explicit Rng(std::uint64_t master, std::uint64_t stream = 0);
  explicit Rng(const SeedRecord& record) : Rng(record.master, record.stream) {}

  const SeedRecord& seed() const noexcept { return record_; }

  /// Child stream whose index is drawn from this stream. The child is fully
  /// described by its own seed() and can be rebuilt from it.
  Rng fork();

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_(engine_); }
  std::uint64_t next_u64() { return engine_(); }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  SeedRecord record_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace rrie
