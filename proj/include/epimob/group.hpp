#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epimob/region.hpp"

namespace epimob {

/// Series of values on a shared index where some entries may be absent.
using OptSeries = std::vector<std::optional<double>>;

/// Sort-free median is not attempted: values are copied and nth_element'd.
/// Even counts average the two central values.
double median(std::vector<double> values);

/// Per-typology, per-index median over regions that have a value at that
/// index. Typologies with no contributing region at an index stay absent.
/// Every region in `values` must be registered.
std::map<Typology, OptSeries> group_median(
    const std::map<std::string, OptSeries>& values, const Registry& registry);

/// Scalar convenience: one value per region.
std::map<Typology, std::optional<double>> group_median_scalar(
    const std::map<std::string, double>& values, const Registry& registry);

} // namespace epimob
