#include "voi/reports.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "voi/jsonfmt.hpp"

namespace voi {

using nlohmann::json;

const char* tool_version() { return "1.0.0"; }

namespace {

constexpr const char* kCrlf = "\r\n";

Prior effective_prior(const ProblemFile& file, const RunOptions& opts) {
    if (!opts.prior_override) return file.prior;
    return Prior::from(Belief::from(*opts.prior_override));
}

json tolerance_block() {
    return json{{"tol_feas", tol::feas},
                {"tol_bayes", tol::bayes},
                {"tol_cert_rel", 1e-7},
                {"tol_face_rel", 1e-9},
                {"kkt_residual", tol::kkt}};
}

json make_metadata(const std::string& command, const RunOptions& opts) {
    json meta;
    meta["tool"] = "voi";
    meta["version"] = tool_version();
    meta["command"] = command;
    json o;
    o["epsilon"] = opts.epsilon;
    o["grid_pitch"] = opts.grid_pitch;
    if (opts.value_grid_pitch) o["value_grid_pitch"] = *opts.value_grid_pitch;
    o["seed"] = opts.seed;
    o["format"] = opts.json ? "json" : "csv";
    if (opts.prior_override) o["prior_override"] = *opts.prior_override;
    meta["options"] = o;
    meta["tolerances"] = tolerance_block();
    return meta;
}

std::string csv_metadata(const std::string& command, const RunOptions& opts) {
    std::ostringstream out;
    out << "# tool=voi version=" << tool_version() << " command=" << command << kCrlf;
    out << "# epsilon=" << format_double(opts.epsilon)
        << " grid_pitch=" << format_double(opts.grid_pitch) << " seed=" << opts.seed << kCrlf;
    out << "# tol_feas=" << format_double(tol::feas) << " tol_bayes=" << format_double(tol::bayes)
        << " tol_cert_rel=1e-07 kkt=" << format_double(tol::kkt) << kCrlf;
    return out.str();
}

json certificate_json(const BoundCertificate& cert) {
    json c;
    switch (cert.theorem) {
        case BoundCertificate::Theorem::T1: c["theorem"] = "T1"; break;
        case BoundCertificate::Theorem::T2: c["theorem"] = "T2"; break;
        case BoundCertificate::Theorem::T3: c["theorem"] = "T3"; break;
    }
    c["lower"] = cert.lower;
    c["voi"] = cert.voi;
    c["upper"] = cert.upper;
    c["sandwich_ok"] = cert.sandwich_ok();
    json d;
    for (const auto& [k, v] : cert.details) d[k] = v;
    c["details"] = d;
    return c;
}

const InformationStructure& require_information(const ProblemFile& file) {
    if (!file.information)
        throw Error(ErrorKind::ValidationError, "problem file carries no information structure");
    return *file.information;
}

ScalarBody smooth_body_of(const SmoothBodySpec& spec) {
    if (spec.kind == SmoothBodySpec::Kind::QuadraticScoring) return quadratic_scoring_body();
    InsuranceParams params{spec.alpha, spec.fee, spec.wealth, spec.risk_aversion};
    params.validate();
    return insurance_body(params);
}

struct SmoothClassification {
    Regime regime = Regime::Other;
    double interval_lo = 0.0;
    double interval_hi = 1.0;
    std::optional<double> threshold_value;
    std::string note;
};

SmoothClassification classify_smooth(const SmoothBodySpec& spec, double t) {
    SmoothClassification out;
    if (spec.kind == SmoothBodySpec::Kind::QuadraticScoring) {
        out.regime = Regime::Flexible;
        out.interval_lo = out.interval_hi = t;
        return out;
    }
    InsuranceParams params{spec.alpha, spec.fee, spec.wealth, spec.risk_aversion};
    params.validate();
    try {
        const double p_star = threshold(params);
        out.threshold_value = p_star;
        if (std::abs(t - p_star) <= tol::feas) {
            out.regime = Regime::Undecided;
            out.interval_lo = out.interval_hi = p_star;
        } else if (t < p_star) {
            out.regime = Regime::Confident;
            out.interval_lo = 0.0;
            out.interval_hi = p_star;
        } else {
            out.regime = Regime::Flexible;
            out.interval_lo = out.interval_hi = t;
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::ConvergenceFailure) throw;
        out.note = std::string("threshold not representable: ") + e.what();
        out.regime = Regime::Other;
        out.interval_lo = out.interval_hi = t;
    }
    return out;
}

// Exact breakpoint of two payoff lines in the state-2 coordinate.
std::optional<double> line_crossing(const Action& a, const Action& b) {
    const double num = a.payoffs[0] - b.payoffs[0];
    const double den = (a.payoffs[0] - b.payoffs[0]) + (b.payoffs[1] - a.payoffs[1]);
    if (den == 0.0) return std::nullopt;
    const double t = num / den;
    if (t < 0.0 || t > 1.0) return std::nullopt;
    return t;
}

std::size_t best_vertex(const ActionSet& A, const Belief& p) {
    std::size_t arg = 0;
    double best = dot(A.vertices[0].payoffs, p.probs());
    for (std::size_t i = 1; i < A.vertices.size(); ++i) {
        const double v = dot(A.vertices[i].payoffs, p.probs());
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    return arg;
}

}  // namespace

OutputBundle run_value(const ProblemFile& file, const RunOptions& opts) {
    const Prior prior = effective_prior(file, opts);
    const std::size_t K = prior.size();
    const double pitch = opts.value_grid_pitch.value_or(K == 2 ? 5e-4 : 2e-2);

    std::ostringstream csv;
    csv << csv_metadata("value", opts);
    std::vector<double> kinks;

    if (file.problem) {
        const ActionSet A = to_action_set(*file.problem);
        const std::vector<Belief> grid = simplex_grid(K, pitch);
        if (K == 2) {
            for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
                const std::size_t w0 = best_vertex(A, grid[i]);
                const std::size_t w1 = best_vertex(A, grid[i + 1]);
                if (w0 == w1) continue;
                if (auto t = line_crossing(A.vertices[w0], A.vertices[w1])) kinks.push_back(*t);
            }
            for (const Belief& p : grid)
                if (affine_dimension(optimal_actions(A, p).vertices) >= 1) kinks.push_back(p[1]);
            std::sort(kinks.begin(), kinks.end());
            kinks.erase(std::unique(kinks.begin(), kinks.end(),
                                    [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                        kinks.end());
        }
        if (!kinks.empty()) {
            csv << "# kinks_state2=";
            for (std::size_t i = 0; i < kinks.size(); ++i)
                csv << (i ? ";" : "") << format_double(kinks[i]);
            csv << kCrlf;
        }
        for (std::size_t i = 1; i <= K; ++i) csv << "p_" << i << ",";
        csv << "value,face_dim" << kCrlf;
        for (const Belief& p : grid) {
            const ActionSet face = optimal_actions(A, p);
            for (std::size_t i = 0; i < K; ++i) csv << format_double(p[i]) << ",";
            csv << format_double(value_function(A, p)) << ","
                << affine_dimension(face.vertices) << kCrlf;
        }
    } else {
        const ScalarBody body = smooth_body_of(*file.body);
        std::optional<double> p_star;
        if (file.body->kind == SmoothBodySpec::Kind::CaraInsurance) {
            SmoothClassification c = classify_smooth(*file.body, prior.belief()[1]);
            p_star = c.threshold_value;
            if (!c.note.empty()) csv << "# note=" << c.note << kCrlf;
        }
        if (p_star) {
            kinks.push_back(*p_star);
            csv << "# kinks_state2=" << format_double(*p_star) << kCrlf;
        }
        csv << "p_1,p_2,value,face_dim" << kCrlf;
        const std::size_t n = static_cast<std::size_t>(std::llround(1.0 / pitch));
        for (std::size_t i = 1; i < n; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(n);
            const int face_dim = (p_star && std::abs(t - *p_star) < 1e-12) ? 1 : 0;
            csv << format_double(1.0 - t) << "," << format_double(t) << ","
                << format_double(body.value(t)) << "," << face_dim << kCrlf;
        }
    }

    OutputBundle bundle;
    bundle.parts.push_back({"value.csv", csv.str()});
    return bundle;
}

OutputBundle run_voi(const ProblemFile& file, const RunOptions& opts) {
    const Prior prior = effective_prior(file, opts);
    const InformationStructure& info = require_information(file);

    json out;
    out["metadata"] = make_metadata("voi", opts);
    if (file.problem) {
        const ActionSet A = to_action_set(*file.problem);
        const double v = value_of_information(A, prior, info);
        out["voi"] = v;
        out["value_at_prior"] = value_function(A, prior.belief());
        out["valuable"] = is_valuable(A, prior, info);
    } else {
        const ScalarBody body = smooth_body_of(*file.body);
        const double v = value_of_information(body, prior, info);
        out["voi"] = v;
        out["value_at_prior"] = body.value(prior.belief()[1]);
        out["valuable"] = v > 1e-9 * (1.0 + std::abs(body.value(prior.belief()[1])));
    }

    OutputBundle bundle;
    bundle.parts.push_back({"voi.json", dump_json(out)});
    return bundle;
}

OutputBundle run_bounds(const ProblemFile& file, const RunOptions& opts) {
    const Prior prior = effective_prior(file, opts);
    const InformationStructure& info = require_information(file);

    json out;
    out["metadata"] = make_metadata("bounds", opts);
    json certs = json::array();
    json warnings = json::array();

    if (file.problem) {
        const ActionSet A = to_action_set(*file.problem);
        const RegimeReport report = classify_prior(A, prior);
        out["regime"] = regime_name(report.regime);
        out["face_dim"] = report.face_dim;
        out["voi"] = value_of_information(A, prior, info);
        certs.push_back(certificate_json(theorem1_bounds(A, prior, info, opts.epsilon, opts.grid_pitch)));
        if (report.face_dim >= 1) {
            certs.push_back(certificate_json(theorem2_bounds(A, prior, info)));
        } else {
            warnings.push_back("T2 skipped: prior is not undecided (no kink)");
        }
        warnings.push_back("T3 skipped: polyhedral bodies are never flexible");
    } else {
        const ScalarBody body = smooth_body_of(*file.body);
        const SmoothClassification cls = classify_smooth(*file.body, prior.belief()[1]);
        out["regime"] = regime_name(cls.regime);
        out["face_dim"] = cls.regime == Regime::Undecided ? 1 : 0;
        out["voi"] = value_of_information(body, prior, info);
        if (!cls.note.empty()) warnings.push_back(cls.note);
        warnings.push_back("T1/T2 skipped: implemented for polyhedral bodies");
        try {
            certs.push_back(certificate_json(theorem3_bounds(body, prior, info, opts.grid_pitch)));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotFlexible) throw;
            warnings.push_back(std::string("T3 skipped: ") + e.what());
        }
    }
    out["certificates"] = certs;
    out["warnings"] = warnings;

    OutputBundle bundle;
    bundle.parts.push_back({"bounds.json", dump_json(out)});
    return bundle;
}

OutputBundle run_confidence(const ProblemFile& file, const RunOptions& opts) {
    const Prior prior = effective_prior(file, opts);

    json out;
    out["metadata"] = make_metadata("confidence", opts);
    if (file.problem) {
        const ActionSet A = to_action_set(*file.problem);
        const BeliefPolytope conf = confidence_set(A, prior);
        json hs = json::array();
        for (const Halfspace& h : conf.halfspaces)
            hs.push_back(json{{"normal", h.normal}, {"offset", h.offset}});
        out["halfspaces"] = hs;
        out["empty"] = polytope_is_empty(conf);
        if (prior.size() == 2) {
            double lo = 0.0, hi = 1.0;
            if (polytope_interval(conf, lo, hi)) out["interval_state2"] = json::array({lo, hi});
        }
    } else {
        const SmoothClassification cls = classify_smooth(*file.body, prior.belief()[1]);
        out["halfspaces"] = json::array();
        out["empty"] = false;
        out["interval_state2"] = json::array({cls.interval_lo, cls.interval_hi});
        if (!cls.note.empty()) out["note"] = cls.note;
    }

    OutputBundle bundle;
    if (opts.json) {
        bundle.parts.push_back({"confidence.json", dump_json(out)});
    } else {
        std::ostringstream csv;
        csv << csv_metadata("confidence", opts);
        if (out.contains("interval_state2"))
            csv << "# interval_state2=" << format_double(out["interval_state2"][0].get<double>())
                << ";" << format_double(out["interval_state2"][1].get<double>()) << kCrlf;
        const std::size_t K = prior.size();
        for (std::size_t i = 1; i <= K; ++i) csv << "normal_" << i << ",";
        csv << "offset" << kCrlf;
        for (const auto& h : out["halfspaces"]) {
            for (const auto& x : h["normal"]) csv << format_double(x.get<double>()) << ",";
            csv << format_double(h["offset"].get<double>()) << kCrlf;
        }
        bundle.parts.push_back({"confidence.csv", csv.str()});
    }
    return bundle;
}

OutputBundle run_classify(const ProblemFile& file, const RunOptions& opts) {
    const Prior prior = effective_prior(file, opts);

    json out;
    out["metadata"] = make_metadata("classify", opts);
    if (file.problem) {
        const ActionSet A = to_action_set(*file.problem);
        const RegimeReport report = classify_prior(A, prior);
        out["regime"] = regime_name(report.regime);
        out["face_dim"] = report.face_dim;
        json constants;
        for (const auto& [k, v] : report.constants) constants[k] = v;
        out["constants"] = constants;
        if (prior.size() == 2) {
            double lo = 0.0, hi = 1.0;
            if (polytope_interval(report.confidence, lo, hi))
                out["confidence_interval_state2"] = json::array({lo, hi});
        }
        if (report.hessian) {
            json h = json::array();
            for (std::size_t i = 0; i < report.hessian->rows; ++i) {
                json row = json::array();
                for (std::size_t j = 0; j < report.hessian->cols; ++j)
                    row.push_back(report.hessian->at(i, j));
                h.push_back(row);
            }
            out["hessian_tangent_basis"] = h;
        }
    } else {
        const SmoothClassification cls = classify_smooth(*file.body, prior.belief()[1]);
        out["regime"] = regime_name(cls.regime);
        out["face_dim"] = cls.regime == Regime::Undecided ? 1 : 0;
        out["confidence_interval_state2"] = json::array({cls.interval_lo, cls.interval_hi});
        if (cls.threshold_value) out["threshold"] = *cls.threshold_value;
        if (!cls.note.empty()) out["note"] = cls.note;
    }

    OutputBundle bundle;
    bundle.parts.push_back({"classify.json", dump_json(out)});
    return bundle;
}

namespace {

json slope_probe(const InsuranceParams& params, double p) {
    json probe;
    probe["p"] = p;
    const std::vector<double> eps_grid = {1e-2, 1e-3, 1e-4, 1e-5};
    json values = json::object();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    double largest_voi = 0.0;
    for (double eps : eps_grid) {
        if (!(eps < std::min(p, 1.0 - p))) continue;
        const double v = voi_epsilon(params, p, eps);
        values[format_double(eps)] = v;
        if (eps == eps_grid.front()) largest_voi = v;
        if (v > 1e-300) {
            const double lx = std::log(eps), ly = std::log(v);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++n;
        }
    }
    probe["voi_epsilon"] = values;
    if (n >= 2) {
        probe["loglog_slope"] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    } else {
        probe["loglog_slope"] = nullptr;
    }
    if (largest_voi > 0.0 && largest_voi < 1.0)
        probe["voi_monetary_equivalent_at_1e-2"] =
            -std::log1p(-largest_voi) / params.risk_aversion;
    return probe;
}

}  // namespace

OutputBundle run_insurance(const InsuranceParams& params, const RunOptions& opts) {
    params.validate();
    OutputBundle bundle;

    std::ostringstream set_csv;
    set_csv << csv_metadata("insurance", opts);
    set_csv << "# alpha=" << format_double(params.alpha) << " fee=" << format_double(params.fee)
            << " wealth=" << format_double(params.wealth)
            << " risk_aversion=" << format_double(params.risk_aversion) << kCrlf;
    set_csv << "kind,indemnity,payoff_no_loss,payoff_loss" << kCrlf;
    set_csv << "no_insurance,," << format_double(utility(params, params.wealth)) << ","
            << format_double(utility(params, 0.0)) << kCrlf;
    for (double I : default_indemnity_grid(params)) {
        const double prem = premium(params, I);
        set_csv << "coverage," << format_double(I) << ","
                << format_double(utility(params, params.wealth - prem)) << ","
                << format_double(utility(params, I - prem)) << kCrlf;
    }
    bundle.parts.push_back({"setA.csv", set_csv.str()});

    std::ostringstream value_csv;
    value_csv << csv_metadata("insurance", opts);
    value_csv << "q,value" << kCrlf;
    for (int i = 1; i < 2000; ++i) {
        const double q = static_cast<double>(i) / 2000.0;
        value_csv << format_double(q) << "," << format_double(insurance_value(params, q)) << kCrlf;
    }
    bundle.parts.push_back({"value.csv", value_csv.str()});

    json report;
    report["metadata"] = make_metadata("insurance", opts);
    report["params"] = json{{"alpha", params.alpha},
                            {"fee", params.fee},
                            {"wealth", params.wealth},
                            {"risk_aversion", params.risk_aversion}};
    report["indemnity_zero_logit"] = indemnity_zero_logit(params);
    try {
        const double p_star = threshold(params);
        report["threshold"] = json{{"status", "ok"}, {"p_star", p_star}};
        json probes = json::array();
        probes.push_back(slope_probe(params, p_star));
        if (p_star + 0.1 < 1.0 - 0.02) probes.push_back(slope_probe(params, p_star + 0.1));
        if (p_star - 0.05 > 0.02) probes.push_back(slope_probe(params, p_star - 0.05));
        report["regime_probes"] = probes;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::ConvergenceFailure) throw;
        report["threshold"] = json{{"status", "no-sign-change"}, {"detail", e.what()}};
        bundle.numeric_failure = true;
    }
    bundle.parts.push_back({"report.json", dump_json(report)});
    return bundle;
}

OutputBundle run_table2(const RunOptions& opts) {
    Table2Options topts;
    const std::vector<Table2Row> rows = table2_harness(topts);

    std::ostringstream csv;
    csv << csv_metadata("table2", opts);
    csv << "family,confident,undecided,flexible" << kCrlf;
    for (const Table2Row& row : rows) {
        csv << csv_field(row.family);
        for (const auto& cell : row.cells) csv << "," << marginal_class_name(cell);
        csv << kCrlf;
    }

    json report;
    report["metadata"] = make_metadata("table2", opts);
    json jrows = json::array();
    static const char* regime_names[3] = {"confident", "undecided", "flexible"};
    for (const Table2Row& row : rows) {
        json jr;
        jr["family"] = row.family;
        for (int r = 0; r < 3; ++r) {
            const auto& rep = row.reports[static_cast<std::size_t>(r)];
            json cell;
            cell["classification"] = marginal_class_name(row.cells[static_cast<std::size_t>(r)]);
            if (rep.slope) cell["slope"] = *rep.slope;
            cell["thetas"] = rep.thetas;
            cell["voi"] = rep.voi_values;
            cell["skipped_thetas"] = rep.skipped;
            jr[regime_names[r]] = cell;
        }
        jrows.push_back(jr);
    }
    report["rows"] = jrows;

    OutputBundle bundle;
    bundle.parts.push_back({"table2.csv", csv.str()});
    bundle.parts.push_back({"report.json", dump_json(report)});
    return bundle;
}

}  // namespace voi
