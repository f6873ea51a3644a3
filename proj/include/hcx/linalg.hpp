#pragma once

#include "hcx/linalg/basis.hpp"
#include "hcx/linalg/cg.hpp"
#include "hcx/linalg/cholesky.hpp"
#include "hcx/linalg/dense.hpp"
#include "hcx/linalg/eigen.hpp"
#include "hcx/linalg/matrix_market.hpp"
#include "hcx/linalg/rng.hpp"
#include "hcx/linalg/sym_matrix.hpp"
#include "hcx/linalg/vector.hpp"
