#pragma once

#include <string>

#include "pca/market.hpp"

namespace pca {

// Market file schema (JSON): {"buyers":[{"id","bid","budget"|"budget_curve",
// "valuation"?}], "sellers":[{"id","reserve","constraint":{"family","params"}}],
// "edges":[{"id"?,"buyer","seller"}]}. Rationals are "p/q" strings or numbers.
Market load_market(const std::string& path);
Market parse_market(const std::string& json_text);
std::string market_to_json(const Market& m);
void save_market(const Market& m, const std::string& path);

std::string allocation_to_json(const Allocation& a, const Market& m);
void save_allocation(const Allocation& a, const Market& m, const std::string& path);
Allocation load_allocation(const std::string& path, const Market& m);

}  // namespace pca
