#pragma once

#include "hcx/expansion/csv.hpp"
#include "hcx/expansion/laurent.hpp"
#include "hcx/expansion/solver.hpp"
#include "hcx/expansion/sweep.hpp"
