#include <cstring>
#include <string>

#include "doctest.h"
#include "voi/voi.h"

namespace {
const std::string kData = VOI_TEST_DATA_DIR;

struct Output {
    voi_output* raw = nullptr;
    ~Output() { voi_output_free(raw); }
    std::string part(const std::string& name) const {
        for (int i = 0; i < voi_output_count(raw); ++i)
            if (name == voi_output_name(raw, i)) return voi_output_text(raw, i);
        return {};
    }
};

struct Problem {
    voi_problem* raw = nullptr;
    ~Problem() { voi_problem_free(raw); }
};
}  // namespace

TEST_CASE("C API loads problems and reports errors by class") {
    Problem p;
    CHECK(voi_problem_load_file((kData + "/table1_split.json").c_str(), &p.raw) == VOI_OK);
    CHECK(voi_problem_num_states(p.raw) == 2);
    CHECK(voi_problem_has_information(p.raw) == 1);

    voi_problem* bad = nullptr;
    CHECK(voi_problem_load_file((kData + "/empty.json").c_str(), &bad) == VOI_ERR_PARSE);
    CHECK(bad == nullptr);
    CHECK(std::strlen(voi_last_error()) > 0);

    CHECK(voi_problem_load_file((kData + "/invalid_weights.json").c_str(), &bad) ==
          VOI_ERR_VALIDATION);

    CHECK(voi_problem_parse("{ nope", &bad) == VOI_ERR_PARSE);
}

TEST_CASE("C API runs the analysis commands") {
    Problem p;
    REQUIRE(voi_problem_load_file((kData + "/table1_split.json").c_str(), &p.raw) == VOI_OK);

    voi_options opts;
    voi_options_init(&opts);

    Output voi_out;
    REQUIRE(voi_run(p.raw, "voi", &opts, &voi_out.raw) == VOI_OK);
    const std::string voi_json = voi_out.part("voi.json");
    CHECK(voi_json.find("\"voi\": 0.75") != std::string::npos);
    CHECK(voi_json.find("\"valuable\": true") != std::string::npos);

    Output bounds_out;
    REQUIRE(voi_run(p.raw, "bounds", &opts, &bounds_out.raw) == VOI_OK);
    const std::string bounds = bounds_out.part("bounds.json");
    CHECK(bounds.find("\"theorem\": \"T1\"") != std::string::npos);
    CHECK(bounds.find("\"sandwich_ok\": true") != std::string::npos);
    CHECK(bounds.find("\"regime\": \"Confident\"") != std::string::npos);

    Output conf_out;
    REQUIRE(voi_run(p.raw, "confidence", &opts, &conf_out.raw) == VOI_OK);
    CHECK(conf_out.part("confidence.json").find("0.33333333333333") != std::string::npos);

    Output value_out;
    REQUIRE(voi_run(p.raw, "value", &opts, &value_out.raw) == VOI_OK);
    const std::string csv = value_out.part("value.csv");
    CHECK(csv.find("# kinks_state2=0.33333333333333331;0.8") != std::string::npos);
    CHECK(csv.find("p_1,p_2,value,face_dim") != std::string::npos);

    Output bad_out;
    CHECK(voi_run(p.raw, "no-such-command", &opts, &bad_out.raw) == VOI_ERR_VALIDATION);
}

TEST_CASE("C API prior override changes the regime") {
    Problem p;
    REQUIRE(voi_problem_load_file((kData + "/table1.json").c_str(), &p.raw) == VOI_OK);
    voi_options opts;
    voi_options_init(&opts);
    const double kink[2] = {2.0 / 3.0, 1.0 / 3.0};
    opts.prior = kink;
    opts.prior_len = 2;
    Output out;
    REQUIRE(voi_run(p.raw, "classify", &opts, &out.raw) == VOI_OK);
    CHECK(out.part("classify.json").find("\"regime\": \"Undecided\"") != std::string::npos);
}

TEST_CASE("C API insurance and threshold entry points") {
    voi_insurance_params params;
    voi_insurance_params_init(&params);
    CHECK(params.alpha == 0.08);

    double p_star = 0.0;
    // Headline parameters: the root lies below double range -> numeric error.
    CHECK(voi_insurance_threshold(&params, &p_star) == VOI_ERR_NUMERIC);

    voi_insurance_params bench{0.3, 29.0, 100.0, 0.02};
    REQUIRE(voi_insurance_threshold(&bench, &p_star) == VOI_OK);
    CHECK(p_star > 0.34);
    CHECK(p_star < 0.36);

    voi_options opts;
    voi_options_init(&opts);
    Output out;
    REQUIRE(voi_run_insurance(&bench, &opts, &out.raw) == VOI_OK);
    CHECK(voi_output_count(out.raw) == 3);
    CHECK(voi_output_numeric_failure(out.raw) == 0);
    CHECK(out.part("report.json").find("\"status\": \"ok\"") != std::string::npos);
    CHECK(out.part("setA.csv").find("no_insurance") != std::string::npos);
    CHECK(out.part("value.csv").find("q,value") != std::string::npos);

    Output defaulted;
    REQUIRE(voi_run_insurance(&params, &opts, &defaulted.raw) == VOI_OK);
    CHECK(voi_output_numeric_failure(defaulted.raw) == 1);
    CHECK(defaulted.part("report.json").find("no-sign-change") != std::string::npos);
}
