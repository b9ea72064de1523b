#pragma once

#include <string>

#include "pca/mechanisms.hpp"

namespace pca {

// Fixed-width table, one row per iteration: l, then per nonvirtual buyer the
// clock, demand and clinch total, then per seller the remaining stock,
// revenue increment and virtual-buyer clock.
std::string trace_table(const Trace& t, const Market& preprocessed);

// Full machine-readable trace (clock/demand snapshots, clinch vectors).
std::string trace_json(const Trace& t, const Market& preprocessed);

}  // namespace pca
