#ifndef VOI_MODEL_HPP
#define VOI_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "voi/geometry.hpp"

namespace voi {

struct DecisionProblem {
    std::vector<std::string> states;
    std::vector<std::string> decisions;
    std::vector<Vec> payoffs;  // one row per decision, one column per state

    std::size_t num_states() const { return states.size(); }
    void validate() const;  // throws ValidationError
};

// Full-support belief held before information arrives.
class Prior {
public:
    static Prior from(Belief b);
    const Belief& belief() const { return b_; }
    std::size_t size() const { return b_.size(); }

private:
    explicit Prior(Belief b) : b_(std::move(b)) {}
    Belief b_;
};

struct WeightedPosterior {
    Belief posterior;
    double weight = 0.0;
};

// Finite distribution over posteriors; Bayes plausibility is checked against
// a prior by validate_information_structure.
struct InformationStructure {
    std::vector<WeightedPosterior> atoms;

    // E[q] as a plain vector.
    Vec mean() const;
    double weight_sum() const;
};

struct ValidationIssue {
    std::string field;
    double residual = 0.0;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool valid() const { return issues.empty(); }
};

ActionSet to_action_set(const DecisionProblem& problem);

ValidationReport validate_information_structure(const InformationStructure& info,
                                                const Prior& prior);

// Requires a valid structure.  Contracts every posterior toward the prior:
// q -> prior + mix * (q - prior).  mix=1 is the identity, mix=0 the null
// structure.
InformationStructure garble(const InformationStructure& info, const Prior& prior,
                            double mix);

// Closed-form K=2 bodies that a payoff matrix cannot encode.
struct SmoothBodySpec {
    enum class Kind { QuadraticScoring, CaraInsurance } kind = Kind::QuadraticScoring;
    double alpha = 0.08;
    double fee = 10.0;
    double wealth = 1000.0;
    double risk_aversion = 10.0;
};

// Parsed problem file: either a payoff matrix or a smooth body, plus the
// prior and an optional information structure.
struct ProblemFile {
    std::optional<DecisionProblem> problem;
    std::optional<SmoothBodySpec> body;
    Prior prior;
    std::optional<InformationStructure> information;
};

ProblemFile parse_problem(const std::string& json_text);
ProblemFile load_problem(const std::string& path);
std::string problem_to_json(const ProblemFile& file);
void save_problem(const std::string& path, const ProblemFile& file);

// Generic JSON record emission (metadata-bearing results files).
void save_results(const std::string& path, const std::string& json_text);

}  // namespace voi

#endif
