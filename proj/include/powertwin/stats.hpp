#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace powertwin::stats {

/// Quantile by linear interpolation between order statistics (Hyndman-Fan
/// type 7): h = (n - 1) p, q = x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
/// `sorted` must be ascending and non-empty.
inline double quantile_sorted(std::span<const double> sorted, double p)
{
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of an empty sample");
    }
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double p)
{
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, p);
}

} // namespace powertwin::stats
