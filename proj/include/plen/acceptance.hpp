#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace plen {

enum class SuiteMode { quick, full };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  nlohmann::json metrics;  // deterministic for fixed (mode, seed)
};

struct AcceptanceReport {
  SuiteMode mode = SuiteMode::quick;
  std::uint64_t seed = 42;
  std::vector<CriterionResult> criteria;  // ordered by id

  [[nodiscard]] bool passed() const;
};

/// Runs every acceptance criterion; `on_done` sees each result with its wall time.
AcceptanceReport run_acceptance(SuiteMode mode, std::uint64_t seed = 42,
                                const std::function<void(const CriterionResult&, double)>& on_done = {});

nlohmann::json to_json(const AcceptanceReport& report);

}  // namespace plen
