#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "botdetect/logio.hpp"
#include "botdetect/rng.hpp"

namespace botdetect {

/// Output rows: csm, semi, mat. Input columns: S1, S2, S3.
struct WeightMatrix {
  std::array<std::array<double, 3>, 3> w{};

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;
};

enum class WeightSet { WS1, WS2, WS3, WS4, WS5 };

inline constexpr WeightSet kAllWeightSets[] = {WeightSet::WS1, WeightSet::WS2, WeightSet::WS3,
                                               WeightSet::WS4, WeightSet::WS5};

WeightMatrix weights_for(WeightSet ws);
std::string_view weight_set_name(WeightSet ws);
std::optional<WeightSet> weight_set_from_name(std::string_view name);

struct InterimOutputs {
  double csm = 0.0;
  double semi = 0.0;
  double mat = 0.0;

  friend bool operator==(const InterimOutputs&, const InterimOutputs&) = default;
};

namespace dca {

InterimOutputs interim_outputs(const SignalRecord& s, const WeightMatrix& w);

struct DendriticCell {
  std::uint64_t id = 0;
  double migration_threshold = 0.0;
  double o1 = 0.0;  // csm
  double o2 = 0.0;  // semi
  double o3 = 0.0;  // mat
  std::map<Pid, std::uint64_t> store;
};

/// 0 (semi-mature) when o2 > o3, otherwise 1.
int context_of(const DendriticCell& cell);

struct DcaConfig {
  std::size_t population_size = 100;
  double threshold_low = 100.0;
  double threshold_high = 500.0;
  WeightMatrix weights = weights_for(WeightSet::WS3);
  std::size_t replication = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PresentedAntigen {
  Pid pid = 0;
  int context = 0;
  std::uint64_t count = 0;

  friend bool operator==(const PresentedAntigen&, const PresentedAntigen&) = default;
};

/// Single-writer population engine. Feed events in merged order, then finish().
class Engine {
 public:
  explicit Engine(const DcaConfig& cfg);

  void feed(const Event& ev);
  void on_signal(const SignalRecord& s);
  void on_antigen(const AntigenRecord& a);

  /// Force-migrates every cell still holding antigen and returns everything
  /// presented since construction. The engine is spent afterwards.
  std::vector<PresentedAntigen> finish();

  std::span<const DendriticCell> cells() const { return cells_; }
  std::uint64_t migrations() const { return migrations_; }

 private:
  DendriticCell fresh_cell();
  void migrate(DendriticCell& cell);

  DcaConfig cfg_;
  Rng rng_;
  std::vector<DendriticCell> cells_;
  std::vector<std::size_t> scratch_;
  std::vector<PresentedAntigen> presented_;
  std::uint64_t next_id_ = 0;
  std::uint64_t migrations_ = 0;
};

std::vector<PresentedAntigen> run_dca(std::span<const Event> stream, const DcaConfig& cfg);

}  // namespace dca
}  // namespace botdetect
