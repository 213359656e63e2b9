#include "dermarket/sweep.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "dermarket/equilibrium_full.hpp"
#include "dermarket/equilibrium_restricted.hpp"
#include "dermarket/welfare.hpp"

namespace dermarket {

const char* const kSweepCsvHeader =
    "n_generators,lambda_T,lambda_S,lambda_TN,lambda_SN,"
    "w_T,w_S,w_TN,w_SN,gap_T_S,gap_TN_SN,delta,delta_n,active_set_size_SN";

SweepRow sweep_row(const Scenario& base, int n_generators) {
    const Scenario s = base.with_generator_count(n_generators);
    const EquilibriumOutcome full_truthful = solve_full_truthful(s);
    const EquilibriumOutcome full_strategic = solve_full_strategic(s);
    const EquilibriumOutcome restricted_truthful = solve_restricted_truthful(s);
    const EquilibriumOutcome restricted_strategic = solve_restricted_strategic(s);
    const GapReport gaps = gap_identities(s, full_truthful, full_strategic,
                                          restricted_truthful, restricted_strategic);

    SweepRow row;
    row.n_generators = n_generators;
    row.lambda_T = full_truthful.price;
    row.lambda_S = full_strategic.price;
    row.lambda_TN = restricted_truthful.price;
    row.lambda_SN = restricted_strategic.price;
    row.w_T = gaps.wT;
    row.w_S = gaps.wS;
    row.w_TN = gaps.wTN;
    row.w_SN = gaps.wSN;
    row.gap_T_S = gaps.gap_T_S;
    row.gap_TN_SN = gaps.gap_TN_SN;
    row.delta = gaps.delta;
    row.delta_n = gaps.delta_n;
    row.active_set_size_SN = *restricted_strategic.active_set_size;
    return row;
}

std::vector<SweepRow> run_sweep(const Scenario& s, int n_min, int n_max) {
    if (n_min < 1 || n_min > n_max)
        throw std::invalid_argument("fleet size range must satisfy 1 <= n_min <= n_max");
    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max - n_min) + 1);
    for (int n = n_min; n <= n_max; ++n) rows.push_back(sweep_row(s, n));
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    auto cell = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    out << kSweepCsvHeader << '\n';
    for (const SweepRow& r : rows) {
        out << r.n_generators << ',' << cell(r.lambda_T) << ',' << cell(r.lambda_S) << ','
            << cell(r.lambda_TN) << ',' << cell(r.lambda_SN) << ',' << cell(r.w_T) << ','
            << cell(r.w_S) << ',' << cell(r.w_TN) << ',' << cell(r.w_SN) << ','
            << cell(r.gap_T_S) << ',' << cell(r.gap_TN_SN) << ',' << cell(r.delta) << ','
            << cell(r.delta_n) << ',' << r.active_set_size_SN << '\n';
    }
}

}  // namespace dermarket
