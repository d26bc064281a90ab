#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isosurf/chart.hpp"

namespace isosurf {

/// Properties a catalog chart is known to have; each is checked against the
/// analyzers by the test suite and by `isosurf check`.
struct Expected {
  AmbientSpace ambient;
  bool substantial = true;
  bool minimal = true;
  bool isotropic = true;
  /// Number of higher normal bundles, floor((N - 1) / 2).
  int levels = 1;
  /// dim N_k at a regular point.
  std::vector<int> ranks;
  bool periodic = false;
  /// Expected classification of the moduli scan, when the chart is periodic.
  std::optional<std::string> moduli;
  /// Whether the non-regular set contains a grid node at odd resolutions.
  bool has_nonregular_node = false;
};

struct CatalogEntry {
  std::string label;
  std::string description;
  std::shared_ptr<const FormulaChart> chart;
  Expected expected;
};

const std::vector<CatalogEntry>& catalog();
std::vector<std::string> catalog_labels();
/// Throws ValidationError for an unknown label.
const CatalogEntry& catalog_get(const std::string& label);

}  // namespace isosurf
