#pragma once

#include "adder/eigensolver.hpp"
#include "adder/operator.hpp"

// Shared reference setup for the heavier tests: equal mitosis with the
// shifted-hyperbolic rate, plus one converged eigenpair, computed once.
namespace fixtures {

inline const adder::TransitionOperator& ref_op() {
    static const adder::TransitionOperator op(
        adder::FragmentationKernel::equal_mitosis(),
        adder::DivisionRate::shifted_hyperbolic(2.0, 1.0));
    return op;
}

inline const adder::EigenResult& ref_eigen() {
    static const adder::EigenResult r = adder::power_iterate(ref_op(), 30.0, 1537);
    return r;
}

inline double psi_ref(double a) { return a <= 1.0 ? 1.0 : 4.0 / ((1.0 + a) * (1.0 + a)); }

} // namespace fixtures
