#include "nlclaw/report_io.hpp"

#include "nlclaw/errors.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

namespace nlclaw {

nlohmann::json to_json(const MonitorReport& report) {
    nlohmann::json estimates = nlohmann::json::array();
    for (const auto& c : report.checks) {
        estimates.push_back({{"name", c.name},
                             {"paper_eq", c.paper_eq},
                             {"lhs", c.lhs},
                             {"rhs", c.rhs},
                             {"margin", c.margin},
                             {"pass", c.pass}});
    }
    return {{"monitor", report.monitor}, {"pass", report.pass()}, {"estimates", estimates}};
}

nlohmann::json to_json(const StabilityRecord& record) {
    return {{"times", record.times},
            {"psi", record.psi},
            {"psi0", record.psi0},
            {"growth_exponent", record.growth_exponent},
            {"bound_C", record.bound_C},
            {"uniqueness_violation", record.uniqueness_violation},
            {"pass", record.bound_holds}};
}

nlohmann::json to_json(const DependenceReport& report) {
    return {{"t1", report.t1},           {"t2", report.t2},   {"psi_t1", report.psi_t1},
            {"psi_t2", report.psi_t2},   {"rhs", report.rhs}, {"residual", report.residual},
            {"pass", report.pass}};
}

nlohmann::json to_json(const RegimeReport& report) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : report.entries) {
        entries.push_back({{"t", e.time},
                           {"count_I", e.count_I},
                           {"count_J", e.count_J},
                           {"count_K", e.count_K},
                           {"max_I", e.max_I},
                           {"l1_I", e.l1_I},
                           {"max_K", e.max_K},
                           {"l1_K", e.l1_K},
                           {"max_J_gap", e.max_J_gap}});
    }
    return {{"max_I", report.max_I}, {"l1_I", report.l1_I},           {"max_K", report.max_K},
            {"l1_K", report.l1_K},   {"max_J_gap", report.max_J_gap}, {"entries", entries}};
}

void write_diagnostics_csv(std::ostream& out, const Trajectory& run) {
    const auto precision = out.precision();
    out << std::setprecision(17);
    out << "t,linf,l1,tv,mass,max_entropy_residual,sup_k,lip_x_k,tv_bound_rhs\n";
    for (const auto& r : run.diagnostics) {
        out << r.t << ',' << r.linf << ',' << r.l1 << ',' << r.tv << ',' << r.mass << ','
            << r.max_entropy_residual << ',' << r.sup_k << ',' << r.lip_x_k << ','
            << r.tv_bound_rhs << '\n';
    }
    out.precision(precision);
}

ConvergenceText emit_convergence_table(const ConvergenceTable& table) {
    if (table.rows.empty()) {
        throw ParameterError("emit_convergence_table: empty table");
    }
    std::ostringstream text;
    std::ostringstream csv;
    csv << std::setprecision(17);
    csv << "level,delta,dx,n_cells,l1_distance,rate\n";
    text << std::left << std::setw(7) << "level" << std::setw(14) << "delta" << std::setw(14)
         << "dx" << std::setw(9) << "cells" << std::setw(16) << "L1 distance"
         << "rate\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        csv << i << ',' << r.delta << ',' << r.dx << ',' << r.n_cells << ',' << r.l1_distance
            << ',';
        if (r.rate) {
            csv << *r.rate;
        }
        csv << '\n';

        std::ostringstream dist;
        dist << std::scientific << std::setprecision(6) << r.l1_distance;
        text << std::left << std::setw(7) << i << std::setw(14) << std::setprecision(6) << r.delta
             << std::setw(14) << r.dx << std::setw(9) << r.n_cells << std::setw(16)
             << (r.reference ? std::string("(reference)") : dist.str());
        if (r.rate) {
            text << std::fixed << std::setprecision(3) << *r.rate << std::defaultfloat;
        }
        text << '\n';
    }
    return {text.str(), csv.str()};
}

} // namespace nlclaw
