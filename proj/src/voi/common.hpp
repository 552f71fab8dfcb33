#ifndef VOI_COMMON_HPP
#define VOI_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace voi {

using Vec = std::vector<double>;

enum class ErrorKind {
    EmptyInput,
    DimensionMismatch,
    NotMember,
    EmptyPolytope,
    InvalidInput,
    NotUndecided,
    NotFlexible,
    BoundaryPrior,
    DomainError,
    ParseError,
    ValidationError,
    ThetaTooLarge,
    QuadratureResidual,
    ConvergenceFailure,
    DegenerateGrid,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind);

namespace tol {
// Feasibility band for membership / simplex checks.
inline constexpr double feas = 1e-9;
// Bayes-plausibility residual per coordinate.
inline constexpr double bayes = 1e-8;
// Minimum prior mass per state (full-support requirement).
inline constexpr double prior_support = 1e-12;
// Singular-value / affine-rank threshold.
inline constexpr double rank = 1e-9;
// KKT residual for polytope projections.
inline constexpr double kkt = 1e-7;

inline double face(double support_value) {
    return 1e-9 * (1.0 + std::abs(support_value));
}
inline double cert(double voi_value) {
    return 1e-7 * (1.0 + std::abs(voi_value));
}
}  // namespace tol

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec add_scaled(const Vec& a, double t, const Vec& d) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * d[i];
    return r;
}

inline bool all_finite(const Vec& a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

// Dense row-major matrix, small sizes only.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Eigenvalues of a small symmetric matrix (cyclic Jacobi), ascending.
std::vector<double> symmetric_eigenvalues(Matrix m);

}  // namespace voi

#endif
