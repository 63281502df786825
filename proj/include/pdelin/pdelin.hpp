/// @file pdelin.hpp
/// @brief Convenience header pulling in the whole library.
#pragma once

#include "pdelin/appendix_a.hpp"
#include "pdelin/error.hpp"
#include "pdelin/expressions.hpp"
#include "pdelin/fdm_solver.hpp"
#include "pdelin/fft.hpp"
#include "pdelin/images.hpp"
#include "pdelin/laplacian.hpp"
#include "pdelin/matrix_io.hpp"
#include "pdelin/solver_core.hpp"
#include "pdelin/spectral_ops.hpp"
#include "pdelin/spectral_system.hpp"
#include "pdelin/stencil.hpp"
#include "pdelin/tensor.hpp"
#include "pdelin/transforms.hpp"
