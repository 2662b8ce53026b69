#pragma once

#include <cstdint>
#include <deque>
#include <initializer_list>
#include <random>

namespace sailhelm {

/// Source of uniform draws in [0, 1). The selector only ever needs this much,
/// which lets replays substitute a scripted sequence for the seeded engine.
class UniformSource {
 public:
  virtual ~UniformSource() = default;
  virtual double uniform01() = 0;
};

/// Seeded engine used for every stochastic element of a run.
class Rng final : public UniformSource {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// 53 random mantissa bits, identical on every platform.
  double uniform01() override {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Replays a fixed list of draws; throws UsageError once exhausted.
class ScriptedUniform final : public UniformSource {
 public:
  ScriptedUniform() = default;
  ScriptedUniform(std::initializer_list<double> draws) : draws_(draws) {}

  void push(double u) { draws_.push_back(u); }
  [[nodiscard]] std::size_t remaining() const { return draws_.size(); }
  double uniform01() override;

 private:
  std::deque<double> draws_;
};

}  // namespace sailhelm
