#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "inertia/kernels.hpp"
#include "inertia/linalg.hpp"

namespace inertia::est::detail {

// Lawson-Hanson active-set NNLS on the normal equations, restricted to the
// columns with allowed[k] != 0. Entries outside the final passive set are
// exactly zero. Columns that would make the passive Gram block singular are
// skipped; they are linearly dependent on the passive set and carry zero
// gradient at the restricted optimum.
void nnls_gram(const linalg::Matrix& gram, std::span<const double> xty,
               std::span<const std::uint8_t> allowed, std::span<double> w);

// ||y - X w||^2 from the precomputed Gram system, clamped at zero.
double sse_quadform(const kernels::GramSystem& gs, std::span<const double> w);

}  // namespace inertia::est::detail
