#include "voi/voi.h"

#include <cstring>
#include <string>

#include "voi/reports.hpp"

// Glue between the public C interface and the C++ core.

struct voi_problem {
    voi::ProblemFile file;
};

struct voi_output {
    voi::OutputBundle bundle;
};

namespace {

thread_local std::string g_last_error;

voi_status status_of(const voi::Error& e) {
    switch (e.kind()) {
        case voi::ErrorKind::ParseError:
            return VOI_ERR_PARSE;
        case voi::ErrorKind::ValidationError:
        case voi::ErrorKind::InvalidInput:
            return VOI_ERR_VALIDATION;
        case voi::ErrorKind::ConvergenceFailure:
        case voi::ErrorKind::QuadratureResidual:
            return VOI_ERR_NUMERIC;
        default:
            return VOI_ERR_INVALID;
    }
}

voi_status fail(const voi::Error& e) {
    g_last_error = std::string(voi::error_kind_name(e.kind())) + ": " + e.what();
    return status_of(e);
}

voi_status fail_message(const char* msg) {
    g_last_error = msg;
    return VOI_ERR_INVALID;
}

voi::RunOptions convert(const voi_options* opts) {
    voi::RunOptions out;
    if (!opts) return out;
    out.epsilon = opts->epsilon;
    out.grid_pitch = opts->grid_pitch;
    if (opts->value_grid_pitch > 0.0) out.value_grid_pitch = opts->value_grid_pitch;
    out.seed = opts->seed;
    out.json = opts->format_json != 0;
    if (opts->prior && opts->prior_len > 0)
        out.prior_override = voi::Vec(opts->prior, opts->prior + opts->prior_len);
    return out;
}

template <typename Fn>
voi_status wrap(voi_output** out, Fn&& fn) {
    if (!out) return fail_message("null output pointer");
    *out = nullptr;
    try {
        auto bundle = fn();
        *out = new voi_output{std::move(bundle)};
        return VOI_OK;
    } catch (const voi::Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return VOI_ERR_INVALID;
    }
}

}  // namespace

extern "C" {

const char* voi_version(void) { return voi::tool_version(); }

const char* voi_last_error(void) { return g_last_error.c_str(); }

void voi_options_init(voi_options* opts) {
    if (!opts) return;
    opts->epsilon = 0.05;
    opts->grid_pitch = 1e-3;
    opts->value_grid_pitch = 0.0;
    opts->seed = 0;
    opts->format_json = 1;
    opts->prior = nullptr;
    opts->prior_len = 0;
}

void voi_insurance_params_init(voi_insurance_params* params) {
    if (!params) return;
    params->alpha = 0.08;
    params->fee = 10.0;
    params->wealth = 1000.0;
    params->risk_aversion = 10.0;
}

voi_status voi_problem_load_file(const char* path, voi_problem** out) {
    if (!path || !out) return fail_message("null argument");
    *out = nullptr;
    try {
        *out = new voi_problem{voi::load_problem(path)};
        return VOI_OK;
    } catch (const voi::Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return VOI_ERR_INVALID;
    }
}

voi_status voi_problem_parse(const char* json_text, voi_problem** out) {
    if (!json_text || !out) return fail_message("null argument");
    *out = nullptr;
    try {
        *out = new voi_problem{voi::parse_problem(json_text)};
        return VOI_OK;
    } catch (const voi::Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return VOI_ERR_INVALID;
    }
}

void voi_problem_free(voi_problem* problem) { delete problem; }

int voi_problem_num_states(const voi_problem* problem) {
    if (!problem) return 0;
    return static_cast<int>(problem->file.prior.size());
}

int voi_problem_has_information(const voi_problem* problem) {
    return problem && problem->file.information ? 1 : 0;
}

voi_status voi_run(const voi_problem* problem, const char* command, const voi_options* opts,
                   voi_output** out) {
    if (!problem || !command) return fail_message("null argument");
    const std::string cmd(command);
    return wrap(out, [&] {
        const voi::RunOptions ropts = convert(opts);
        if (cmd == "value") return voi::run_value(problem->file, ropts);
        if (cmd == "voi") return voi::run_voi(problem->file, ropts);
        if (cmd == "bounds") return voi::run_bounds(problem->file, ropts);
        if (cmd == "confidence") return voi::run_confidence(problem->file, ropts);
        if (cmd == "classify") return voi::run_classify(problem->file, ropts);
        throw voi::Error(voi::ErrorKind::InvalidInput, "unknown command '" + cmd + "'");
    });
}

voi_status voi_run_insurance(const voi_insurance_params* params, const voi_options* opts,
                             voi_output** out) {
    if (!params) return fail_message("null argument");
    return wrap(out, [&] {
        voi::InsuranceParams p{params->alpha, params->fee, params->wealth,
                               params->risk_aversion};
        return voi::run_insurance(p, convert(opts));
    });
}

voi_status voi_run_table2(const voi_options* opts, voi_output** out) {
    return wrap(out, [&] { return voi::run_table2(convert(opts)); });
}

int voi_output_count(const voi_output* output) {
    return output ? static_cast<int>(output->bundle.parts.size()) : 0;
}

const char* voi_output_name(const voi_output* output, int index) {
    if (!output || index < 0 || index >= voi_output_count(output)) return nullptr;
    return output->bundle.parts[static_cast<std::size_t>(index)].name.c_str();
}

const char* voi_output_text(const voi_output* output, int index) {
    if (!output || index < 0 || index >= voi_output_count(output)) return nullptr;
    return output->bundle.parts[static_cast<std::size_t>(index)].text.c_str();
}

int voi_output_numeric_failure(const voi_output* output) {
    return output && output->bundle.numeric_failure ? 1 : 0;
}

void voi_output_free(voi_output* output) { delete output; }

voi_status voi_insurance_threshold(const voi_insurance_params* params, double* p_star) {
    if (!params || !p_star) return fail_message("null argument");
    try {
        voi::InsuranceParams p{params->alpha, params->fee, params->wealth,
                               params->risk_aversion};
        *p_star = voi::threshold(p);
        return VOI_OK;
    } catch (const voi::Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return VOI_ERR_INVALID;
    }
}

}  // extern "C"
