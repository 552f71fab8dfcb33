#include "voi/common.hpp"

#include <algorithm>

namespace voi {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotMember: return "NotMember";
        case ErrorKind::EmptyPolytope: return "EmptyPolytope";
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::NotUndecided: return "NotUndecided";
        case ErrorKind::NotFlexible: return "NotFlexible";
        case ErrorKind::BoundaryPrior: return "BoundaryPrior";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::ThetaTooLarge: return "ThetaTooLarge";
        case ErrorKind::QuadratureResidual: return "QuadratureResidual";
        case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorKind::DegenerateGrid: return "DegenerateGrid";
    }
    return "Unknown";
}

std::vector<double> symmetric_eigenvalues(Matrix m) {
    const std::size_t n = m.rows;
    if (n == 0) return {};
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += m.at(i, j) * m.at(i, j);
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = m.at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = m.at(k, p), akq = m.at(k, q);
                    m.at(k, p) = c * akp - s * akq;
                    m.at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = m.at(p, k), aqk = m.at(q, k);
                    m.at(p, k) = c * apk - s * aqk;
                    m.at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = m.at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace voi
