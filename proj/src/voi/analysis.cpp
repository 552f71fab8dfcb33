#include "voi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace voi {

double value_function(const ActionSet& A, const Belief& p) {
    return support_function(A, p.probs()).value;
}

ActionSet optimal_actions(const ActionSet& A, const Belief& p) {
    return exposed_face(A, p.probs());
}

namespace {

void require_valid(const InformationStructure& info, const Prior& prior) {
    ValidationReport r = validate_information_structure(info, prior);
    if (!r.valid()) {
        std::string msg = "information structure fails validation:";
        for (const auto& issue : r.issues) msg += " [" + issue.field + "] " + issue.message + ";";
        throw Error(ErrorKind::InvalidInput, msg);
    }
}

Vec face_centroid(const ActionSet& face) {
    Vec c(face.dim(), 0.0);
    for (const Action& a : face.vertices)
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += a.payoffs[i];
    for (double& x : c) x /= static_cast<double>(face.vertices.size());
    return c;
}

// Modified Gram-Schmidt; appends the normalized residual when it clears the
// rank threshold.  Returns true when the vector enlarged the span.
bool mgs_extend(std::vector<Vec>& basis, Vec v) {
    const double scale = 1.0 + norm2(v);
    for (const Vec& b : basis) {
        const double c = dot(v, b);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
    const double r = norm2(v);
    if (r <= tol::rank * scale) return false;
    for (double& x : v) x /= r;
    basis.push_back(std::move(v));
    return true;
}

}  // namespace

int affine_dimension(const std::vector<Action>& vertices) {
    if (vertices.empty()) return -1;
    std::vector<Vec> basis;
    for (std::size_t i = 1; i < vertices.size(); ++i)
        mgs_extend(basis, sub(vertices[i].payoffs, vertices.front().payoffs));
    return static_cast<int>(basis.size());
}

double value_of_information(const ActionSet& A, const Prior& prior,
                            const InformationStructure& info) {
    require_valid(info, prior);
    double expected = 0.0;
    for (const auto& atom : info.atoms)
        expected += atom.weight * value_function(A, atom.posterior);
    return expected - value_function(A, prior.belief());
}

BeliefPolytope confidence_set(const ActionSet& A, const Prior& prior) {
    const ActionSet face = optimal_actions(A, prior.belief());
    BeliefPolytope P;
    P.dim = A.dim();
    for (const Action& fa : face.vertices) {
        for (const Action& other : A.vertices) {
            Vec normal = sub(other.payoffs, fa.payoffs);
            if (norm2(normal) == 0.0) continue;
            P.halfspaces.push_back(Halfspace{std::move(normal), 0.0});
        }
    }
    return P;
}

bool is_valuable(const ActionSet& A, const Prior& prior, const InformationStructure& info) {
    require_valid(info, prior);
    const BeliefPolytope conf = confidence_set(A, prior);
    for (const auto& atom : info.atoms)
        if (atom.weight > 0.0 && !conf.contains(atom.posterior)) return true;
    return false;
}

std::vector<Vec> indifference_kernel(const ActionSet& A, const Prior& prior) {
    const ActionSet face = optimal_actions(A, prior.belief());
    const std::size_t k = A.dim();
    std::vector<Vec> span;
    for (std::size_t i = 1; i < face.vertices.size(); ++i)
        mgs_extend(span, sub(face.vertices[i].payoffs, face.vertices.front().payoffs));

    std::vector<Vec> kernel;
    std::vector<Vec> combined = span;
    for (std::size_t i = 0; i < k; ++i) {
        Vec e(k, 0.0);
        e[i] = 1.0;
        if (mgs_extend(combined, std::move(e))) kernel.push_back(combined.back());
    }
    return kernel;
}

double indifference_seminorm(const ActionSet& A, const Prior& prior, const SignedMeasure& s) {
    const ActionSet face = optimal_actions(A, prior.belief());
    if (affine_dimension(face.vertices) < 1)
        throw Error(ErrorKind::NotUndecided, "optimal face is a singleton");
    // Greedy affinely-spanning subset, in input order.
    std::vector<const Action*> T{&face.vertices.front()};
    std::vector<Vec> basis;
    for (std::size_t i = 1; i < face.vertices.size(); ++i)
        if (mgs_extend(basis, sub(face.vertices[i].payoffs, face.vertices.front().payoffs)))
            T.push_back(&face.vertices[i]);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Action* a : T) {
        const double v = dot(s, a->payoffs);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return (hi - lo) / static_cast<double>(T.size());
}

namespace {

// Cheap exact-or-banded distance queries against a fixed polytope.
class DistanceOracle {
public:
    DistanceOracle(const BeliefPolytope& P) : P_(P) {
        if (P.dim == 2) {
            two_ = polytope_interval(P, lo_, hi_);
            if (!two_) throw Error(ErrorKind::EmptyPolytope, "empty confidence set");
        }
        for (const Halfspace& h : P.halfspaces) {
            double mean = 0.0;
            for (double x : h.normal) mean += x;
            mean /= static_cast<double>(P.dim);
            Vec nt(h.normal);
            for (double& x : nt) x -= mean;
            tangent_norm_.push_back(norm2(nt));
        }
    }

    double exact(const Belief& q) const {
        if (P_.dim == 2) return std::sqrt(2.0) * interval_gap(q[1]);
        if (P_.contains(q)) return 0.0;
        return project_onto_polytope(q, P_).distance;
    }

    // Distance lower bound; 0 iff the point is inside.
    double lower_bound(const Belief& q) const {
        if (P_.dim == 2) return std::sqrt(2.0) * interval_gap(q[1]);
        double lb = 0.0;
        for (std::size_t i = 0; i < P_.halfspaces.size(); ++i) {
            const double viol = dot(P_.halfspaces[i].normal, q.probs()) - P_.halfspaces[i].offset;
            if (viol > 0.0 && tangent_norm_[i] > tol::rank)
                lb = std::max(lb, viol / tangent_norm_[i]);
        }
        return lb;
    }

    bool at_least(const Belief& q, double eps) const {
        if (P_.dim == 2) return exact(q) >= eps;
        const double lb = lower_bound(q);
        if (lb <= 0.0) return false;
        if (lb >= eps) return true;
        return exact(q) >= eps;
    }

private:
    double interval_gap(double t) const {
        if (t < lo_) return lo_ - t;
        if (t > hi_) return t - hi_;
        return 0.0;
    }

    const BeliefPolytope& P_;
    bool two_ = false;
    double lo_ = 0.0, hi_ = 1.0;
    std::vector<double> tangent_norm_;
};

double max_distance_to_vertices(const ActionSet& A, const Vec& from) {
    double worst = 0.0;
    for (const Action& a : A.vertices) worst = std::max(worst, norm2(sub(from, a.payoffs)));
    return worst;
}

double min_max_vertex_distance(const ActionSet& A) {
    double best = std::numeric_limits<double>::infinity();
    for (const Action& a : A.vertices)
        best = std::min(best, max_distance_to_vertices(A, a.payoffs));
    return best;
}

// Theorem-1 upper constant.  phi_a vanishes on the confidence set only for
// actions of the optimal face, so the minimization runs over face candidates
// (vertices and centroid), not the whole hull.
double theorem1_upper_constant(const ActionSet& A, const ActionSet& face) {
    double best = max_distance_to_vertices(A, face_centroid(face));
    for (const Action& a : face.vertices)
        best = std::min(best, max_distance_to_vertices(A, a.payoffs));
    return best;
}

}  // namespace

std::vector<Belief> simplex_grid(std::size_t K, double pitch) {
    if (!(pitch > 0.0 && pitch <= 0.5))
        throw Error(ErrorKind::DomainError, "grid pitch out of range");
    std::vector<Belief> grid;
    if (K == 2) {
        const std::size_t n = static_cast<std::size_t>(std::llround(1.0 / pitch));
        grid.reserve(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            grid.push_back(belief2(static_cast<double>(i) / static_cast<double>(n)));
        return grid;
    }
    const std::size_t n = static_cast<std::size_t>(std::llround(1.0 / pitch));
    // Compositions of n into K parts.
    Vec counts(K, 0.0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
        if (grid.size() > 2000000)
            throw Error(ErrorKind::DegenerateGrid, "simplex grid too fine for this dimension");
        if (pos == K - 1) {
            counts[pos] = static_cast<double>(left);
            Vec p(K);
            for (std::size_t i = 0; i < K; ++i) p[i] = counts[i] / static_cast<double>(n);
            grid.push_back(Belief::unchecked(std::move(p)));
            return;
        }
        for (std::size_t c = 0; c <= left; ++c) {
            counts[pos] = static_cast<double>(c);
            rec(pos + 1, left - c);
        }
    };
    rec(0, n);
    return grid;
}

BoundCertificate theorem1_bounds(const ActionSet& A, const Prior& prior,
                                 const InformationStructure& info, double epsilon,
                                 double grid_pitch) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidInput, "epsilon must be positive");
    require_valid(info, prior);

    BoundCertificate cert;
    cert.theorem = BoundCertificate::Theorem::T1;
    cert.voi = value_of_information(A, prior, info);

    const BeliefPolytope conf = confidence_set(A, prior);
    DistanceOracle oracle(conf);
    const ActionSet face = optimal_actions(A, prior.belief());

    const double c_A = theorem1_upper_constant(A, face);
    double expected_distance = 0.0;
    double prob_outside = 0.0;
    std::vector<double> atom_distance(info.atoms.size());
    for (std::size_t i = 0; i < info.atoms.size(); ++i) {
        atom_distance[i] = oracle.exact(info.atoms[i].posterior);
        expected_distance += info.atoms[i].weight * atom_distance[i];
        if (atom_distance[i] >= epsilon) prob_outside += info.atoms[i].weight;
    }
    cert.upper = c_A * expected_distance;

    const Vec witness = face_centroid(face);
    const double v_prior = value_function(A, prior.belief());
    auto phi = [&](const Belief& q) {
        return support_function(A, q.probs()).value - v_prior -
               dot(sub(q.probs(), prior.belief().probs()), witness);
    };

    double c_eps = std::numeric_limits<double>::infinity();
    if (A.dim() <= 3) {
        const double pitch = (A.dim() == 2) ? grid_pitch : std::max(grid_pitch, 1e-2);
        for (const Belief& p : simplex_grid(A.dim(), pitch))
            if (oracle.at_least(p, epsilon)) c_eps = std::min(c_eps, phi(p));
    }
    for (std::size_t i = 0; i < info.atoms.size(); ++i)
        if (atom_distance[i] >= epsilon) c_eps = std::min(c_eps, phi(info.atoms[i].posterior));
    if (!std::isfinite(c_eps)) c_eps = 0.0;
    c_eps = std::max(0.0, c_eps);

    cert.lower = c_eps * prob_outside;
    cert.details["epsilon"] = epsilon;
    cert.details["grid_pitch"] = grid_pitch;
    cert.details["C_A"] = c_A;
    cert.details["c_mu_A_eps"] = c_eps;
    cert.details["expected_distance"] = expected_distance;
    cert.details["prob_outside_eps"] = prob_outside;
    return cert;
}

BoundCertificate theorem2_bounds(const ActionSet& A, const Prior& prior,
                                 const InformationStructure& info) {
    const ActionSet face = optimal_actions(A, prior.belief());
    if (affine_dimension(face.vertices) < 1)
        throw Error(ErrorKind::NotUndecided, "prior is not at a kink");
    require_valid(info, prior);

    BoundCertificate cert;
    cert.theorem = BoundCertificate::Theorem::T2;
    cert.voi = value_of_information(A, prior, info);

    double sup_norm = 0.0;
    for (const Action& a : A.vertices) sup_norm = std::max(sup_norm, norm2(a.payoffs));
    double expected_dist = 0.0;
    double expected_seminorm = 0.0;
    for (const auto& atom : info.atoms) {
        const Vec d = sub(atom.posterior.probs(), prior.belief().probs());
        expected_dist += atom.weight * norm2(d);
        expected_seminorm += atom.weight * indifference_seminorm(A, prior, d);
    }
    const double inner = value_of_information(face, prior, info);

    cert.upper = sup_norm * expected_dist;
    cert.lower = expected_seminorm;
    cert.details["C_A"] = sup_norm;
    cert.details["expected_distance"] = expected_dist;
    cert.details["inner_voi_face"] = inner;
    cert.details["expected_seminorm"] = expected_seminorm;
    return cert;
}

Matrix numeric_hessian(const ValueFn& fn, const Belief& prior, double step) {
    if (!(step >= 1e-5 && step <= 1e-2))
        throw Error(ErrorKind::DomainError, "hessian step must lie in [1e-5, 1e-2]");
    const std::size_t k = prior.size();
    for (std::size_t i = 0; i < k; ++i)
        if (prior[i] <= 2.0 * step)
            throw Error(ErrorKind::BoundaryPrior,
                        "prior too close to the simplex boundary for this step");

    auto shifted = [&](double si, std::size_t i, double sj, std::size_t j) {
        Vec p = prior.probs();
        p[0] -= si + sj;
        p[i + 1] += si;
        p[j + 1] += sj;
        return fn(Belief::unchecked(std::move(p)));
    };

    const std::size_t n = k - 1;
    Matrix H(n, n);
    const double f0 = fn(prior);
    for (std::size_t i = 0; i < n; ++i) {
        const double fp = shifted(step, i, 0.0, i);
        const double fm = shifted(-step, i, 0.0, i);
        H.at(i, i) = (fp - 2.0 * f0 + fm) / (step * step);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double fpp = shifted(step, i, step, j);
            const double fpm = shifted(step, i, -step, j);
            const double fmp = shifted(-step, i, step, j);
            const double fmm = shifted(-step, i, -step, j);
            const double v = (fpp - fpm - fmp + fmm) / (4.0 * step * step);
            H.at(i, j) = v;
            H.at(j, i) = v;
        }
    }
    return H;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Confident: return "Confident";
        case Regime::Undecided: return "Undecided";
        case Regime::Flexible: return "Flexible";
        case Regime::Other: return "Other";
    }
    return "Other";
}

RegimeReport classify_prior(const ActionSet& A, const Prior& prior, const ClassifyOptions& opts) {
    RegimeReport report;
    const ActionSet face = optimal_actions(A, prior.belief());
    report.face_dim = affine_dimension(face.vertices);
    report.confidence = confidence_set(A, prior);
    report.constants["C_A_norm"] = [&] {
        double s = 0.0;
        for (const Action& a : A.vertices) s = std::max(s, norm2(a.payoffs));
        return s;
    }();
    report.constants["C_A_diameter"] = min_max_vertex_distance(A);

    if (report.face_dim >= 1) {
        report.regime = Regime::Undecided;
        return report;
    }

    // Confident: a tangential ball of the configured radius fits inside.
    const std::size_t k = A.dim();
    double min_margin = std::numeric_limits<double>::infinity();
    for (const Halfspace& h : report.confidence.halfspaces) {
        double mean = 0.0;
        for (double x : h.normal) mean += x;
        mean /= static_cast<double>(k);
        Vec nt(h.normal);
        for (double& x : nt) x -= mean;
        const double nn = norm2(nt);
        if (nn <= tol::rank) continue;  // constant on the simplex plane
        min_margin = std::min(min_margin, (h.offset - dot(h.normal, prior.belief().probs())) / nn);
    }
    const double facet_norm = std::sqrt(1.0 - 1.0 / static_cast<double>(k));
    for (std::size_t i = 0; i < k; ++i)
        min_margin = std::min(min_margin, prior.belief()[i] / facet_norm);
    if (min_margin >= opts.confident_radius) {
        report.regime = Regime::Confident;
        return report;
    }

    try {
        Matrix H = numeric_hessian([&](const Belief& p) { return value_function(A, p); },
                                   prior.belief(), opts.hessian_step);
        const std::vector<double> ev = symmetric_eigenvalues(H);
        report.hessian = std::move(H);
        report.constants["hessian_min_eigenvalue"] = ev.front();
        report.regime = (ev.front() > opts.eig_threshold) ? Regime::Flexible : Regime::Other;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BoundaryPrior) throw;
        report.regime = Regime::Other;
    }
    return report;
}

ScalarBody quadratic_scoring_body() {
    ScalarBody body;
    body.value = [](double t) { return 1.0 - t * (1.0 - t); };
    body.slope = [](double t) { return 2.0 * t - 1.0; };
    return body;
}

double value_function(const ScalarBody& body, double t) { return body.value(t); }

double value_of_information(const ScalarBody& body, const Prior& prior,
                            const InformationStructure& info) {
    if (prior.size() != 2)
        throw Error(ErrorKind::DimensionMismatch, "scalar bodies are two-state only");
    require_valid(info, prior);
    double expected = 0.0;
    for (const auto& atom : info.atoms) expected += atom.weight * body.value(atom.posterior[1]);
    return expected - body.value(prior.belief()[1]);
}

BoundCertificate theorem3_bounds(const ScalarBody& body, const Prior& prior,
                                 const InformationStructure& info, double grid_pitch) {
    if (prior.size() != 2)
        throw Error(ErrorKind::DimensionMismatch, "scalar bodies are two-state only");
    require_valid(info, prior);
    const double mu = prior.belief()[1];

    // Flexibility probe: curvature at the prior must be positive.
    const double h = 1e-4;
    const double curvature = (body.value(mu + h) - 2.0 * body.value(mu) + body.value(mu - h)) / (h * h);
    if (!(curvature > 1e-8))
        throw Error(ErrorKind::NotFlexible, "value function is not strictly curved at the prior");

    const double v_mu = body.value(mu);
    const double slope = body.slope(mu);
    auto g = [&](double x) {
        const double d = x - mu;
        return (body.value(x) - v_mu - slope * d) / (d * d);
    };

    double gmin = std::numeric_limits<double>::infinity();
    double gmax = -gmin;
    const std::size_t n = static_cast<std::size_t>(std::llround(1.0 / grid_pitch));
    for (std::size_t i = 1; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n);
        if (std::abs(x - mu) < 0.5 * grid_pitch) continue;
        const double v = g(x);
        gmin = std::min(gmin, v);
        gmax = std::max(gmax, v);
    }
    double second_moment = 0.0;
    double expected = 0.0;
    for (const auto& atom : info.atoms) {
        const double t = atom.posterior[1];
        expected += atom.weight * body.value(t);
        second_moment += atom.weight * (t - mu) * (t - mu);
        if (std::abs(t - mu) > 1e-14) {
            const double v = g(t);
            gmin = std::min(gmin, v);
            gmax = std::max(gmax, v);
        }
    }

    BoundCertificate cert;
    cert.theorem = BoundCertificate::Theorem::T3;
    cert.voi = expected - v_mu;
    cert.lower = gmin * second_moment;
    cert.upper = gmax * second_moment;
    cert.details["grid_pitch"] = grid_pitch;
    cert.details["c_mu_A"] = gmin;
    cert.details["C_mu_A"] = gmax;
    cert.details["second_moment_state2"] = second_moment;
    cert.details["curvature_at_prior"] = curvature;
    return cert;
}

}  // namespace voi
