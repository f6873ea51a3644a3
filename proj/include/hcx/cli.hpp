#pragma once

#include "hcx/cli/config.hpp"
#include "hcx/cli/expression.hpp"
#include "hcx/cli/oracle_suite.hpp"
#include "hcx/cli/runner.hpp"
#include "hcx/cli/svg.hpp"
