#ifndef VOI_TEST_HELPERS_HPP
#define VOI_TEST_HELPERS_HPP

#include <random>
#include <vector>

#include "voi/analysis.hpp"

namespace testutil {

using namespace voi;

// The four-action payoff table used throughout: rows (3,0),(2,2),(0,5/2),(0,0).
inline ActionSet example_body() {
    return hull_reduce({Action{{3.0, 0.0}}, Action{{2.0, 2.0}}, Action{{0.0, 2.5}},
                        Action{{0.0, 0.0}}});
}

inline DecisionProblem example_problem() {
    DecisionProblem p;
    p.states = {"k1", "k2"};
    p.decisions = {"d1", "d2", "d3", "d4"};
    p.payoffs = {{3.0, 0.0}, {2.0, 2.0}, {0.0, 2.5}, {0.0, 0.0}};
    return p;
}

inline Vec random_belief_vec(std::mt19937_64& rng, std::size_t K, double floor_mass = 0.0) {
    std::exponential_distribution<double> e(1.0);
    Vec p(K);
    double s = 0.0;
    for (double& x : p) {
        x = e(rng) + floor_mass;
        s += x;
    }
    for (double& x : p) x /= s;
    return p;
}

inline ActionSet random_body(std::mt19937_64& rng, std::size_t K, int max_vertices = 8) {
    std::uniform_int_distribution<int> nd(2, max_vertices);
    std::uniform_real_distribution<double> coord(-1.0, 3.0);
    const int n = nd(rng);
    std::vector<Action> pts;
    for (int i = 0; i < n; ++i) {
        Vec v(K);
        for (double& x : v) x = coord(rng);
        pts.push_back(Action{std::move(v)});
    }
    return hull_reduce(std::move(pts));
}

// Random Bayes-plausible structure built by successive mean-preserving splits.
inline InformationStructure random_structure(std::mt19937_64& rng, const Prior& prior,
                                             int atoms_target) {
    struct Atom {
        Vec q;
        double w;
    };
    std::vector<Atom> atoms{{prior.belief().probs(), 1.0}};
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t K = prior.size();
    int guard = 0;
    while (static_cast<int>(atoms.size()) < atoms_target && ++guard < 200) {
        const std::size_t idx = static_cast<std::size_t>(unit(rng) * atoms.size()) % atoms.size();
        Atom base = atoms[idx];
        Vec d(K);
        double mean = 0.0;
        for (double& x : d) {
            x = gauss(rng);
            mean += x;
        }
        mean /= static_cast<double>(K);
        double nn = 0.0;
        for (double& x : d) {
            x -= mean;  // keep the mass sum at 1
            nn += x * x;
        }
        if (nn < 1e-12) continue;
        for (double& x : d) x /= std::sqrt(nn);
        double step_up = 1e18, step_dn = 1e18;
        for (std::size_t i = 0; i < K; ++i) {
            if (d[i] < 0.0) step_up = std::min(step_up, -base.q[i] / d[i]);
            if (d[i] > 0.0) step_dn = std::min(step_dn, base.q[i] / d[i]);
        }
        if (step_up < 1e-3 || step_dn < 1e-3) continue;
        const double up = (0.15 + 0.75 * unit(rng)) * step_up;
        const double dn = (0.15 + 0.75 * unit(rng)) * step_dn;
        Atom plus, minus;
        plus.q.resize(K);
        minus.q.resize(K);
        for (std::size_t i = 0; i < K; ++i) {
            plus.q[i] = std::max(0.0, base.q[i] + up * d[i]);
            minus.q[i] = std::max(0.0, base.q[i] - dn * d[i]);
        }
        plus.w = base.w * dn / (up + dn);
        minus.w = base.w * up / (up + dn);
        atoms[idx] = plus;
        atoms.push_back(minus);
    }
    InformationStructure out;
    for (const Atom& a : atoms) out.atoms.push_back({Belief::from(a.q), a.w});
    return out;
}

// Two-state structure with two atoms and exact Bayes weights.
inline InformationStructure two_atom_structure(double mu, double t1, double t2) {
    const double w1 = (mu - t2) / (t1 - t2);
    InformationStructure out;
    out.atoms.push_back({belief2(t1), w1});
    out.atoms.push_back({belief2(t2), 1.0 - w1});
    return out;
}

inline InformationStructure symmetric_split2(double mu, double spread) {
    InformationStructure out;
    out.atoms.push_back({belief2(mu - spread), 0.5});
    out.atoms.push_back({belief2(mu + spread), 0.5});
    return out;
}

inline InformationStructure null_structure(const Prior& prior) {
    InformationStructure out;
    out.atoms.push_back({prior.belief(), 1.0});
    return out;
}

// State-2 coordinates of the kinks of a two-state body's upper envelope.
inline std::vector<double> envelope_kinks(const ActionSet& A) {
    std::vector<double> kinks;
    for (std::size_t i = 0; i < A.vertices.size(); ++i) {
        for (std::size_t j = i + 1; j < A.vertices.size(); ++j) {
            const Action& a = A.vertices[i];
            const Action& b = A.vertices[j];
            const double den = (a.payoffs[0] - b.payoffs[0]) + (b.payoffs[1] - a.payoffs[1]);
            if (den == 0.0) continue;
            const double t = (a.payoffs[0] - b.payoffs[0]) / den;
            if (t <= 1e-6 || t >= 1.0 - 1e-6) continue;
            if (affine_dimension(optimal_actions(A, belief2(t)).vertices) >= 1) kinks.push_back(t);
        }
    }
    std::sort(kinks.begin(), kinks.end());
    kinks.erase(std::unique(kinks.begin(), kinks.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-9; }),
                kinks.end());
    return kinks;
}

// Body with a known kink at `prior` in dimension K: two vertices tied at the
// prior plus dominated extras.
inline ActionSet kink_body(std::mt19937_64& rng, const Prior& prior, int extras = 4) {
    const std::size_t K = prior.size();
    std::uniform_real_distribution<double> coord(-1.0, 3.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec a(K);
    for (double& x : a) x = coord(rng);
    Vec d(K);
    for (double& x : d) x = gauss(rng);
    double pd = dot(prior.belief().probs(), d);
    for (std::size_t i = 0; i < K; ++i) d[i] -= pd;  // <prior, d> = 0
    const double nn = norm2(d);
    if (nn < 1e-9) d[0] += 1.0;
    Vec b(K);
    for (std::size_t i = 0; i < K; ++i) b[i] = a[i] + d[i];
    const double level = dot(prior.belief().probs(), a);
    std::vector<Action> pts{Action{a}, Action{b}};
    std::uniform_real_distribution<double> margin(0.1, 1.0);
    for (int e = 0; e < extras; ++e) {
        Vec c(K);
        for (double& x : c) x = coord(rng);
        const double shift = dot(prior.belief().probs(), c) - (level - margin(rng));
        for (double& x : c) x -= shift;
        pts.push_back(Action{std::move(c)});
    }
    return hull_reduce(std::move(pts));
}

// Brute-force distance from q to P by lattice scan plus local refinement.
inline double grid_distance_oracle(const Belief& q, const BeliefPolytope& P,
                                   double final_pitch) {
    const std::size_t K = q.size();
    double best = 1e300;
    Vec best_p;
    auto consider = [&](const Vec& p) {
        Belief cand = Belief::unchecked(p);
        if (!P.contains(cand, 10 * tol::feas)) return;
        const double d = norm2(sub(q.probs(), p));
        if (d < best) {
            best = d;
            best_p = p;
        }
    };
    const double coarse = (K == 2) ? 1e-3 : 1e-2;
    for (const Belief& p : simplex_grid(K, coarse)) consider(p.probs());
    double pitch = coarse;
    while (pitch > final_pitch && !best_p.empty()) {
        const double next = pitch / 10.0;
        const Vec center = best_p;
        if (K == 2) {
            for (int i = -15; i <= 15; ++i) {
                const double t = std::clamp(center[1] + i * next, 0.0, 1.0);
                consider({1.0 - t, t});
            }
        } else {
            for (int i = -12; i <= 12; ++i) {
                for (int j = -12; j <= 12; ++j) {
                    Vec p = center;
                    p[1] += i * next;
                    p[2] += j * next;
                    p[0] = 1.0 - p[1] - p[2];
                    if (p[0] < 0.0 || p[1] < 0.0 || p[2] < 0.0) continue;
                    consider(p);
                }
            }
        }
        pitch = next;
    }
    return best;
}

}  // namespace testutil

#endif
