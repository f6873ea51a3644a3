#pragma once

#include "hcx/forms/assumptions.hpp"
#include "hcx/forms/form_pair.hpp"
#include "hcx/forms/generator.hpp"
#include "hcx/forms/io.hpp"
#include "hcx/forms/quadratic.hpp"
