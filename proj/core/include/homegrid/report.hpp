#pragma once

#include "homegrid/model.hpp"
#include "homegrid/pareto.hpp"
#include "homegrid/scenario.hpp"

#include <string>
#include <vector>

namespace homegrid {

enum class ReportFormat { Table, Csv, Json };

// Renders per-household ledgers from an assignment: prices, availability
// (grid limit, storage level, renewables), market position, energy sources,
// and active loads per slot, with a footer of recomputed costs. Table output
// rounds to 2 decimals; CSV and JSON carry full precision.
std::string emit_report(const ModelInstance& m, const std::vector<double>& x, const Scenario& s,
                        ReportFormat format);

// Same ledgers for a trading-workflow result, plus the combined totals.
std::string emit_report(const ParetoResult& r, const Scenario& s, ReportFormat format);

}  // namespace homegrid
