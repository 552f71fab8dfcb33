#include "voi/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "voi/jsonfmt.hpp"

namespace voi {

void DecisionProblem::validate() const {
    std::vector<std::string> problems;
    if (states.size() < 2) problems.push_back("need at least two states");
    if (decisions.empty()) problems.push_back("need at least one decision");
    if (payoffs.size() != decisions.size())
        problems.push_back("payoff row count differs from decision count");
    for (std::size_t d = 0; d < payoffs.size(); ++d) {
        if (payoffs[d].size() != states.size()) {
            problems.push_back("payoff row " + std::to_string(d) + " has wrong width");
            continue;
        }
        for (double x : payoffs[d])
            if (!std::isfinite(x)) {
                problems.push_back("payoff row " + std::to_string(d) + " has a non-finite entry");
                break;
            }
    }
    if (!problems.empty()) {
        std::string msg = "invalid decision problem:";
        for (const auto& p : problems) msg += " " + p + ";";
        throw Error(ErrorKind::ValidationError, msg);
    }
}

Prior Prior::from(Belief b) {
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i] < tol::prior_support)
            throw Error(ErrorKind::ValidationError,
                        "prior must have full support (coordinate " + std::to_string(i) +
                            " below 1e-12)");
    return Prior(std::move(b));
}

Vec InformationStructure::mean() const {
    if (atoms.empty()) return {};
    Vec m(atoms.front().posterior.size(), 0.0);
    for (const auto& a : atoms)
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += a.weight * a.posterior[i];
    return m;
}

double InformationStructure::weight_sum() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight;
    return s;
}

ActionSet to_action_set(const DecisionProblem& problem) {
    problem.validate();
    std::vector<Action> rows;
    rows.reserve(problem.payoffs.size());
    for (const Vec& row : problem.payoffs) rows.push_back(Action{row});
    return hull_reduce(std::move(rows));
}

ValidationReport validate_information_structure(const InformationStructure& info,
                                                const Prior& prior) {
    ValidationReport report;
    if (info.atoms.empty()) {
        report.issues.push_back({"atoms", 0.0, "no atoms"});
        return report;
    }
    const std::size_t k = prior.size();
    for (std::size_t i = 0; i < info.atoms.size(); ++i) {
        const auto& a = info.atoms[i];
        if (a.weight <= 0.0)
            report.issues.push_back({"atoms[" + std::to_string(i) + "].weight", a.weight,
                                     "weight must be positive"});
        if (a.posterior.size() != k) {
            report.issues.push_back({"atoms[" + std::to_string(i) + "].posterior", 0.0,
                                     "posterior dimension mismatch"});
            continue;
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double p = a.posterior[j];
            if (p < -tol::feas)
                report.issues.push_back({"atoms[" + std::to_string(i) + "].posterior", p,
                                         "negative posterior coordinate"});
            sum += p;
        }
        if (std::abs(sum - 1.0) > tol::feas)
            report.issues.push_back({"atoms[" + std::to_string(i) + "].posterior", sum - 1.0,
                                     "posterior mass differs from 1"});
    }
    const double wsum = info.weight_sum();
    if (std::abs(wsum - 1.0) > tol::feas)
        report.issues.push_back({"weights", wsum - 1.0, "weights do not sum to 1"});

    Vec mean = info.mean();
    if (mean.size() == k) {
        for (std::size_t j = 0; j < k; ++j) {
            const double r = mean[j] - prior.belief()[j];
            if (std::abs(r) > tol::bayes)
                report.issues.push_back({"bayes[" + std::to_string(j) + "]", r,
                                         "posterior mean differs from the prior"});
        }
    }
    return report;
}

InformationStructure garble(const InformationStructure& info, const Prior& prior,
                            double mix) {
    if (!(mix >= 0.0 && mix <= 1.0))
        throw Error(ErrorKind::DomainError, "mix must lie in [0, 1]");
    if (!validate_information_structure(info, prior).valid())
        throw Error(ErrorKind::InvalidInput, "information structure fails validation");
    InformationStructure out;
    out.atoms.reserve(info.atoms.size());
    for (const auto& a : info.atoms) {
        Vec q(prior.size());
        for (std::size_t i = 0; i < q.size(); ++i)
            q[i] = prior.belief()[i] + mix * (a.posterior[i] - prior.belief()[i]);
        out.atoms.push_back({Belief::from(std::move(q)), a.weight});
    }
    return out;
}

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok)
            throw Error(ErrorKind::ParseError,
                        "unknown field '" + it.key() + "' in " + where);
    }
}

Vec parse_number_array(const json& j, const std::string& where) {
    if (!j.is_array()) throw Error(ErrorKind::ParseError, where + " must be an array");
    Vec v;
    v.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) throw Error(ErrorKind::ParseError, where + " must hold numbers");
        v.push_back(x.get<double>());
    }
    return v;
}

SmoothBodySpec parse_body(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "body must be an object");
    reject_unknown(j, {"kind", "alpha", "fee", "wealth", "risk_aversion"}, "body");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw Error(ErrorKind::ParseError, "body.kind must be a string");
    SmoothBodySpec spec;
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "quadratic-scoring") {
        spec.kind = SmoothBodySpec::Kind::QuadraticScoring;
    } else if (kind == "cara-insurance") {
        spec.kind = SmoothBodySpec::Kind::CaraInsurance;
        auto num = [&](const char* name, double dflt) {
            if (!j.contains(name)) return dflt;
            if (!j[name].is_number())
                throw Error(ErrorKind::ParseError, std::string("body.") + name + " must be a number");
            return j[name].get<double>();
        };
        spec.alpha = num("alpha", spec.alpha);
        spec.fee = num("fee", spec.fee);
        spec.wealth = num("wealth", spec.wealth);
        spec.risk_aversion = num("risk_aversion", spec.risk_aversion);
    } else {
        throw Error(ErrorKind::ParseError, "body.kind must be quadratic-scoring or cara-insurance");
    }
    return spec;
}

}  // namespace

ProblemFile parse_problem(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, std::string("JSON syntax error: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "problem file must be a JSON object");
    reject_unknown(j, {"states", "decisions", "payoffs", "prior", "information", "body"},
                   "problem file");

    if (!j.contains("states")) throw Error(ErrorKind::ParseError, "missing field 'states'");
    if (!j["states"].is_array())
        throw Error(ErrorKind::ParseError, "'states' must be an array of strings");
    std::vector<std::string> states;
    for (const auto& s : j["states"]) {
        if (!s.is_string()) throw Error(ErrorKind::ParseError, "'states' must hold strings");
        states.push_back(s.get<std::string>());
    }

    if (!j.contains("prior")) throw Error(ErrorKind::ParseError, "missing field 'prior'");
    Vec prior_vec = parse_number_array(j["prior"], "'prior'");
    if (prior_vec.size() != states.size())
        throw Error(ErrorKind::ParseError, "'prior' length differs from 'states'");

    const bool has_matrix = j.contains("decisions") || j.contains("payoffs");
    const bool has_body = j.contains("body");
    if (has_matrix && has_body)
        throw Error(ErrorKind::ParseError, "give either payoffs or a body, not both");
    if (!has_matrix && !has_body)
        throw Error(ErrorKind::ParseError, "missing payoffs (or a body)");

    ProblemFile file{std::nullopt, std::nullopt, Prior::from(Belief::from(prior_vec)),
                     std::nullopt};

    if (has_matrix) {
        if (!j.contains("decisions") || !j.contains("payoffs"))
            throw Error(ErrorKind::ParseError, "'decisions' and 'payoffs' go together");
        DecisionProblem problem;
        problem.states = states;
        if (!j["decisions"].is_array())
            throw Error(ErrorKind::ParseError, "'decisions' must be an array of strings");
        for (const auto& d : j["decisions"]) {
            if (!d.is_string())
                throw Error(ErrorKind::ParseError, "'decisions' must hold strings");
            problem.decisions.push_back(d.get<std::string>());
        }
        if (!j["payoffs"].is_array())
            throw Error(ErrorKind::ParseError, "'payoffs' must be an array of rows");
        std::size_t row = 0;
        for (const auto& r : j["payoffs"])
            problem.payoffs.push_back(
                parse_number_array(r, "payoffs[" + std::to_string(row++) + "]"));
        problem.validate();
        file.problem = std::move(problem);
    } else {
        if (states.size() != 2)
            throw Error(ErrorKind::ParseError, "smooth bodies require exactly two states");
        file.body = parse_body(j["body"]);
        if (file.body->kind == SmoothBodySpec::Kind::CaraInsurance) {
            const auto& b = *file.body;
            if (!(b.alpha > 0.0 && b.alpha < 1.0 && b.fee > 0.0 && b.wealth > 0.0 &&
                  b.risk_aversion > 0.0))
                throw Error(ErrorKind::ValidationError, "insurance body parameters out of range");
        }
    }

    if (j.contains("information")) {
        const json& info = j["information"];
        if (!info.is_object())
            throw Error(ErrorKind::ParseError, "'information' must be an object");
        reject_unknown(info, {"atoms"}, "information");
        if (!info.contains("atoms") || !info["atoms"].is_array())
            throw Error(ErrorKind::ParseError, "'information.atoms' must be an array");
        InformationStructure structure;
        std::size_t idx = 0;
        for (const auto& atom : info["atoms"]) {
            if (!atom.is_object())
                throw Error(ErrorKind::ParseError, "information atom must be an object");
            reject_unknown(atom, {"posterior", "weight"},
                           "information.atoms[" + std::to_string(idx) + "]");
            if (!atom.contains("posterior") || !atom.contains("weight") ||
                !atom["weight"].is_number())
                throw Error(ErrorKind::ParseError, "atom needs 'posterior' and numeric 'weight'");
            Vec q = parse_number_array(atom["posterior"], "atom posterior");
            if (q.size() != states.size())
                throw Error(ErrorKind::ParseError, "atom posterior length differs from 'states'");
            structure.atoms.push_back({Belief::from(std::move(q)), atom["weight"].get<double>()});
            ++idx;
        }
        ValidationReport report = validate_information_structure(structure, file.prior);
        if (!report.valid()) {
            std::string msg = "information structure invalid:";
            for (const auto& issue : report.issues)
                msg += " [" + issue.field + "] " + issue.message + ";";
            throw Error(ErrorKind::ValidationError, msg);
        }
        file.information = std::move(structure);
    }
    return file;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (text.empty()) throw Error(ErrorKind::ParseError, "'" + path + "' is empty");
    return parse_problem(text);
}

std::string problem_to_json(const ProblemFile& file) {
    nlohmann::json j;
    if (file.problem) {
        j["states"] = file.problem->states;
        j["decisions"] = file.problem->decisions;
        nlohmann::json rows = nlohmann::json::array();
        for (const Vec& r : file.problem->payoffs) rows.push_back(r);
        j["payoffs"] = rows;
    } else {
        j["states"] = nlohmann::json::array({"state-1", "state-2"});
        nlohmann::json body;
        if (file.body && file.body->kind == SmoothBodySpec::Kind::CaraInsurance) {
            body["kind"] = "cara-insurance";
            body["alpha"] = file.body->alpha;
            body["fee"] = file.body->fee;
            body["wealth"] = file.body->wealth;
            body["risk_aversion"] = file.body->risk_aversion;
        } else {
            body["kind"] = "quadratic-scoring";
        }
        j["body"] = body;
    }
    j["prior"] = file.prior.belief().probs();
    if (file.information) {
        nlohmann::json atoms = nlohmann::json::array();
        for (const auto& a : file.information->atoms) {
            nlohmann::json atom;
            atom["posterior"] = a.posterior.probs();
            atom["weight"] = a.weight;
            atoms.push_back(atom);
        }
        j["information"] = {{"atoms", atoms}};
    }
    return dump_json(j);
}

void save_problem(const std::string& path, const ProblemFile& file) {
    save_results(path, problem_to_json(file));
}

void save_results(const std::string& path, const std::string& json_text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::ValidationError, "cannot write '" + path + "'");
    out << json_text;
}

}  // namespace voi
