#include "fcs/swfreq.hpp"

namespace fcs {

FilterMatrices filter_matrices(const FilterParams& fp) {
    fp.validate();
    FilterMatrices fm;
    fm.A << fp.a1, 0.0,
            1.0 - fp.a1, fp.a2;
    const double b = (1.0 - fp.a2) / (12.0 * fp.T_s);
    fm.B << b, b, b,
            0.0, 0.0, 0.0;
    fm.C << 0.0, 1.0;
    return fm;
}

TransitionVector transitions(const PhaseSwitch& u, const PhaseSwitch& u_prev) {
    return {std::abs(u.a - u_prev.a), std::abs(u.b - u_prev.b), std::abs(u.c - u_prev.c)};
}

FilterState step_filter(const FilterMatrices& fm, const FilterState& x, const TransitionVector& p) {
    return FilterState::from(fm.A * x.as_vector() + fm.B * p.as_vector());
}

FilterState step_filter(const FilterParams& fp, const FilterState& x, const TransitionVector& p) {
    return step_filter(filter_matrices(fp), x, p);
}

double slack(double f_sw, double f_star) {
    if (!(f_star >= 0.0)) throw std::invalid_argument("slack: f_star must be >= 0");
    return std::max(f_sw - f_star, 0.0);
}

}  // namespace fcs
