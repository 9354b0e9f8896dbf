#pragma once

#include "nlclaw/constraint_view.hpp"
#include "nlclaw/diagnostics.hpp"
#include "nlclaw/nonlocal_stepper.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace nlclaw {

/// {monitor, pass, estimates: [{name, paper_eq, lhs, rhs, margin, pass}]}
nlohmann::json to_json(const MonitorReport& report);
nlohmann::json to_json(const StabilityRecord& record);
nlohmann::json to_json(const DependenceReport& report);
nlohmann::json to_json(const RegimeReport& report);

/// Columns t,linf,l1,tv,mass,max_entropy_residual,sup_k,lip_x_k,tv_bound_rhs.
void write_diagnostics_csv(std::ostream& out, const Trajectory& run);

struct ConvergenceText {
    std::string text;
    std::string csv;
};

/// Aligned table (level, delta, dx, L1 distance, observed rate) plus CSV.
ConvergenceText emit_convergence_table(const ConvergenceTable& table);

} // namespace nlclaw
