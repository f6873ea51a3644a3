#pragma once

#include "hcx/precond/benchmark.hpp"
#include "hcx/precond/csv.hpp"
#include "hcx/precond/preconditioner.hpp"
