#include "botdetect/dca.hpp"

#include <utility>

#include "botdetect/error.hpp"

namespace botdetect {

WeightMatrix weights_for(WeightSet ws) {
  // Rows csm, semi, mat; columns S1, S2, S3.
  switch (ws) {
    case WeightSet::WS1: return {{{{2, 1, 2}, {0, 0, 1}, {2, 1, -3}}}};
    case WeightSet::WS2: return {{{{4, 2, 6}, {0, 0, 1}, {8, 4, -12}}}};
    case WeightSet::WS3: return {{{{4, 2, 3}, {0, 0, 1}, {8, 4, -6}}}};
    case WeightSet::WS4: return {{{{2, 1, 1.5}, {0, 0, 1}, {8, 4, -6}}}};
    case WeightSet::WS5: return {{{{8, 4, 0.6}, {0, 0, 1}, {16, 8, -1.2}}}};
  }
  return {};
}

std::string_view weight_set_name(WeightSet ws) {
  switch (ws) {
    case WeightSet::WS1: return "WS1";
    case WeightSet::WS2: return "WS2";
    case WeightSet::WS3: return "WS3";
    case WeightSet::WS4: return "WS4";
    case WeightSet::WS5: return "WS5";
  }
  return "?";
}

std::optional<WeightSet> weight_set_from_name(std::string_view name) {
  for (auto ws : kAllWeightSets)
    if (weight_set_name(ws) == name) return ws;
  return std::nullopt;
}

namespace dca {

InterimOutputs interim_outputs(const SignalRecord& s, const WeightMatrix& w) {
  const auto row = [&](int j) { return w.w[j][0] * s.s1 + w.w[j][1] * s.s2 + w.w[j][2] * s.s3; };
  return {row(0), row(1), row(2)};
}

int context_of(const DendriticCell& cell) { return cell.o2 > cell.o3 ? 0 : 1; }

void DcaConfig::validate() const {
  if (population_size == 0) throw Error(Errc::EmptyPopulation, "population_size is 0");
  if (!(threshold_low > 0.0 && threshold_low <= threshold_high))
    throw Error(Errc::InvalidConfig, "need 0 < threshold_low <= threshold_high");
  if (replication == 0 || replication > population_size)
    throw Error(Errc::InvalidConfig, "replication must be in [1, population_size]");
}

Engine::Engine(const DcaConfig& cfg) : cfg_(cfg), rng_(cfg.seed, 0xdcaULL) {
  cfg_.validate();
  cells_.reserve(cfg_.population_size);
  for (std::size_t i = 0; i < cfg_.population_size; ++i) cells_.push_back(fresh_cell());
  scratch_.resize(cfg_.population_size);
  for (std::size_t i = 0; i < scratch_.size(); ++i) scratch_[i] = i;
}

DendriticCell Engine::fresh_cell() {
  DendriticCell cell;
  cell.id = next_id_++;
  // A fixed threshold draws nothing, so antigen placement stays independent of it.
  cell.migration_threshold = cfg_.threshold_low == cfg_.threshold_high
                                 ? cfg_.threshold_low
                                 : rng_.uniform(cfg_.threshold_low, cfg_.threshold_high);
  return cell;
}

void Engine::migrate(DendriticCell& cell) {
  const int context = context_of(cell);
  for (const auto& [pid, count] : cell.store) presented_.push_back({pid, context, count});
  ++migrations_;
  cell = fresh_cell();
}

void Engine::feed(const Event& ev) {
  if (const auto* s = std::get_if<SignalRecord>(&ev))
    on_signal(*s);
  else
    on_antigen(std::get<AntigenRecord>(ev));
}

void Engine::on_signal(const SignalRecord& s) {
  const auto out = interim_outputs(s, cfg_.weights);
  for (auto& cell : cells_) {
    cell.o1 += out.csm;
    cell.o2 += out.semi;
    cell.o3 += out.mat;
  }
  for (auto& cell : cells_)
    if (cell.o1 >= cell.migration_threshold) migrate(cell);
}

void Engine::on_antigen(const AntigenRecord& a) {
  const std::size_t n = cells_.size();
  if (cfg_.replication == 1) {
    ++cells_[rng_.below(n)].store[a.pid];
    return;
  }
  // Partial Fisher-Yates over a persistent permutation picks distinct cells.
  for (std::size_t k = 0; k < cfg_.replication; ++k) {
    const std::size_t j = k + rng_.below(n - k);
    std::swap(scratch_[k], scratch_[j]);
    ++cells_[scratch_[k]].store[a.pid];
  }
}

std::vector<PresentedAntigen> Engine::finish() {
  for (auto& cell : cells_)
    if (!cell.store.empty()) migrate(cell);
  return std::move(presented_);
}

std::vector<PresentedAntigen> run_dca(std::span<const Event> stream, const DcaConfig& cfg) {
  Engine engine(cfg);
  for (const auto& ev : stream) engine.feed(ev);
  return engine.finish();
}

}  // namespace dca
}  // namespace botdetect
