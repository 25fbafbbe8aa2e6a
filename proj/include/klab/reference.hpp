#pragma once

// Serial, loop-for-loop transcriptions of the defining sums. No batching, no
// compensated summation, no regrouping. The OpenMP kernels are checked
// against these in the test suite and compared with them in bench/.

#include "klab/dispersion.hpp"
#include "klab/forms.hpp"

namespace klab::reference {

FormResult eval_trilinear_B(const TrilinearSpec& spec);
double eval_C1R(const TrilinearSpec& spec);
double eval_Cb(const TrilinearSpec& spec, u64 b);

cd eval_E(const CoefficientSequence& alpha, const CoefficientSequence& beta, u64 q, i64 a);
double eval_Delta(const CoefficientSequence& alpha, const CoefficientSequence& beta, const Support& moduli, i64 a);
DispersionSplit eval_UVW(const CoefficientSequence& alpha, const CoefficientSequence& beta, const Support& moduli,
                         i64 a, const SmoothCutoff& psi, double M_scale);

} // namespace klab::reference
