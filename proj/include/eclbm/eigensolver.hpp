#pragma once

#include <stdexcept>

#include "eclbm/scheme.hpp"

namespace eclbm {

struct EigenNoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EigenOptions {
    bool want_vectors = true;
    double deflation = 1e-13;  // relative to the Frobenius norm of A
    int iteration_factor = 100;  // cap = factor * n
};

struct EigenResult {
    CVec values;
    CMat vectors;  // unit columns; empty when not requested
    int iterations = 0;
};

// Dense complex eigen-decomposition: Householder reduction to Hessenberg form,
// then shifted QR with Givens rotations; eigenvectors by back-substitution on
// the Schur form.
EigenResult eigen_decompose(const CMat& A, const EigenOptions& opt = {});

}  // namespace eclbm
