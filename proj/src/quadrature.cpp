#include "stablehcm/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace stablehcm {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::NonConvergence: return "non_convergence";
        case ErrorKind::CrossValidation: return "cross_validation";
        case ErrorKind::Refinement: return "refinement";
        case ErrorKind::ConstantResolution: return "constant_resolution";
        case ErrorKind::Representation: return "representation";
        case ErrorKind::RoundTrip: return "round_trip";
        case ErrorKind::Divergence: return "divergence";
        case ErrorKind::Continuation: return "continuation";
        case ErrorKind::Evaluation: return "evaluation";
        case ErrorKind::BoundViolation: return "bound_violation";
        case ErrorKind::EnvelopeViolation: return "envelope_violation";
        case ErrorKind::EnvelopeQuality: return "envelope_quality";
        case ErrorKind::ScanExhausted: return "scan_exhausted";
    }
    return "unknown";
}

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0) || !(truncation_tail_tol > 0))
        throw DomainError("quadrature tolerances must be strictly positive");
    if (max_subdivisions < 1) throw DomainError("max_subdivisions must be at least 1");
}

namespace detail {

const GK21& GK21::get() {
    static const GK21 rule = [] {
        using boost::math::quadrature::gauss;
        using boost::math::quadrature::gauss_kronrod;
        GK21 r{};
        const auto& x = gauss_kronrod<double, 21>::abscissa();
        const auto& wk = gauss_kronrod<double, 21>::weights();
        const auto& wg = gauss<double, 10>::weights();
        for (int i = 0; i < 11; ++i) {
            r.x[i] = x[i];
            r.wk[i] = wk[i];
        }
        for (int i = 0; i < 5; ++i) r.wg[i] = wg[i];
        return r;
    }();
    return rule;
}

}  // namespace detail
}  // namespace stablehcm
