#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "dermarket/market.hpp"

namespace dermarket {

// Every reported quantity for one fleet size: the four clearing prices, the
// four welfare levels, the two strategic welfare gaps, the two strategic
// price rises, and the size of the strategic buyer set in the
// restricted market. Field names match the CSV columns.
struct SweepRow {
    int n_generators = 0;
    double lambda_T = 0.0;
    double lambda_S = 0.0;
    double lambda_TN = 0.0;
    double lambda_SN = 0.0;
    double w_T = 0.0;
    double w_S = 0.0;
    double w_TN = 0.0;
    double w_SN = 0.0;
    double gap_T_S = 0.0;
    double gap_TN_SN = 0.0;
    double delta = 0.0;
    double delta_n = 0.0;
    std::size_t active_set_size_SN = 0;
};

// Solves all four models for the scenario's prosumers with the given fleet size.
SweepRow sweep_row(const Scenario& s, int n_generators);

// One row per fleet size in [n_min, n_max]. Requires 1 <= n_min <= n_max,
// else std::invalid_argument.
std::vector<SweepRow> run_sweep(const Scenario& s, int n_min, int n_max);

// CSV with a fixed header and 12 significant digits per floating-point cell.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

extern const char* const kSweepCsvHeader;

}  // namespace dermarket
