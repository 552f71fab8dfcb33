#ifndef VOI_REPORTS_HPP
#define VOI_REPORTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "voi/insurance.hpp"
#include "voi/marginal.hpp"

namespace voi {

const char* tool_version();

struct RunOptions {
    double epsilon = 0.05;
    double grid_pitch = 1e-3;                 // constant-estimation grids
    std::optional<double> value_grid_pitch;   // belief grid for `value`
    unsigned long long seed = 0;
    bool json = true;
    std::optional<Vec> prior_override;
};

struct OutputPart {
    std::string name;  // suggested file suffix, e.g. "value.csv"
    std::string text;
};

struct OutputBundle {
    std::vector<OutputPart> parts;
    bool numeric_failure = false;  // a recorded non-convergence (exit code 4)
};

OutputBundle run_value(const ProblemFile& file, const RunOptions& opts);
OutputBundle run_voi(const ProblemFile& file, const RunOptions& opts);
OutputBundle run_bounds(const ProblemFile& file, const RunOptions& opts);
OutputBundle run_confidence(const ProblemFile& file, const RunOptions& opts);
OutputBundle run_classify(const ProblemFile& file, const RunOptions& opts);
OutputBundle run_insurance(const InsuranceParams& params, const RunOptions& opts);
OutputBundle run_table2(const RunOptions& opts);

}  // namespace voi

#endif
