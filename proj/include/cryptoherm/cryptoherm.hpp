#pragma once

// Band metrics for quasi-Hermitian tridiagonal Hamiltonians: recurrence
// solvers of H^T Theta = Theta H, a brute-force SVD oracle, biorthogonal
// spectral representations, and a paired pentadiagonal construction.

#include "band_metric.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "metric_recur.hpp"
#include "penta.hpp"
#include "polyfam.hpp"
#include "spectral.hpp"
