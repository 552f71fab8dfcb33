// Command-line front end; talks to the library through the C API only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "voi/voi.h"

namespace {

struct OutputDeleter {
    void operator()(voi_output* o) const { voi_output_free(o); }
};
struct ProblemDeleter {
    void operator()(voi_problem* p) const { voi_problem_free(p); }
};
using OutputPtr = std::unique_ptr<voi_output, OutputDeleter>;
using ProblemPtr = std::unique_ptr<voi_problem, ProblemDeleter>;

int report_error(voi_status status) {
    std::cerr << "error: " << voi_last_error() << "\n";
    return static_cast<int>(status);
}

bool parse_prior(const std::string& text, std::vector<double>& out) {
    out.clear();
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(piece, &used));
            if (used != piece.size()) return false;
        } catch (...) {
            return false;
        }
    }
    return !out.empty();
}

int write_outputs(const voi_output* out, const std::string& output_path) {
    const int n = voi_output_count(out);
    if (output_path.empty()) {
        for (int i = 0; i < n; ++i) {
            if (n > 1) std::cout << "==> " << voi_output_name(out, i) << " <==\n";
            std::cout << voi_output_text(out, i);
        }
        return 0;
    }
    for (int i = 0; i < n; ++i) {
        const std::string path =
            (n == 1) ? output_path : output_path + "." + voi_output_name(out, i);
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write " << path << "\n";
            return 5;
        }
        f << voi_output_text(out, i);
        std::cerr << "wrote " << path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Value-of-information analysis for finite-state decision problems"};
    app.set_version_flag("--version", std::string("voi ") + voi_version());
    app.require_subcommand(1);

    std::string input_path, output_path, prior_text, format = "json";
    voi_options opts;
    voi_options_init(&opts);
    voi_insurance_params params;
    voi_insurance_params_init(&params);
    double value_pitch = 0.0;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        if (needs_input)
            cmd->add_option("--input", input_path, "problem file (JSON)")->required();
        cmd->add_option("--output", output_path,
                        "output path (prefix when a command emits several files)");
        cmd->add_option("--prior", prior_text, "override the file prior, e.g. 0.5,0.5");
        cmd->add_option("--epsilon", opts.epsilon, "confidence-set neighborhood radius");
        cmd->add_option("--grid-pitch", opts.grid_pitch, "grid pitch for bound constants");
        cmd->add_option("--value-grid-pitch", value_pitch, "belief grid pitch for value tables");
        cmd->add_option("--seed", opts.seed, "seed echoed into output metadata");
        cmd->add_option("--format", format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* c_value = app.add_subcommand("value", "value function over a belief grid");
    CLI::App* c_voi = app.add_subcommand("voi", "value of the file's information structure");
    CLI::App* c_bounds = app.add_subcommand("bounds", "VoI with the applicable bound certificates");
    CLI::App* c_conf = app.add_subcommand("confidence", "confidence set of the prior");
    CLI::App* c_class = app.add_subcommand("classify", "regime of the prior");
    for (CLI::App* c : {c_value, c_voi, c_bounds, c_conf, c_class}) add_common(c, true);

    CLI::App* c_ins = app.add_subcommand("insurance", "CARA insurance reproduction data");
    add_common(c_ins, false);
    c_ins->add_option("--alpha", params.alpha, "loading factor");
    c_ins->add_option("--fee", params.fee, "fixed fee");
    c_ins->add_option("--wealth", params.wealth, "value of the insured good");
    c_ins->add_option("--risk-aversion", params.risk_aversion, "CARA coefficient");

    CLI::App* c_table = app.add_subcommand("table2", "marginal-value classification grid");
    add_common(c_table, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 5;
    }

    std::vector<double> prior_override;
    if (!prior_text.empty()) {
        if (!parse_prior(prior_text, prior_override)) {
            std::cerr << "error: cannot parse --prior\n";
            return 5;
        }
        opts.prior = prior_override.data();
        opts.prior_len = prior_override.size();
    }
    opts.format_json = (format == "json") ? 1 : 0;
    if (value_pitch > 0.0) opts.value_grid_pitch = value_pitch;

    OutputPtr out;
    voi_status status = VOI_OK;

    if (c_ins->parsed()) {
        voi_output* raw = nullptr;
        status = voi_run_insurance(&params, &opts, &raw);
        out.reset(raw);
    } else if (c_table->parsed()) {
        voi_output* raw = nullptr;
        status = voi_run_table2(&opts, &raw);
        out.reset(raw);
    } else {
        const char* cmd = app.get_subcommands().front()->get_name().c_str();
        voi_problem* problem_raw = nullptr;
        status = voi_problem_load_file(input_path.c_str(), &problem_raw);
        ProblemPtr problem(problem_raw);
        if (status != VOI_OK) return report_error(status);
        voi_output* raw = nullptr;
        status = voi_run(problem.get(), cmd, &opts, &raw);
        out.reset(raw);
    }

    if (status != VOI_OK) return report_error(status);
    const int write_rc = write_outputs(out.get(), output_path);
    if (write_rc != 0) return write_rc;
    if (voi_output_numeric_failure(out.get())) {
        std::cerr << "warning: numeric non-convergence recorded in the report\n";
        return static_cast<int>(VOI_ERR_NUMERIC);
    }
    return 0;
}
