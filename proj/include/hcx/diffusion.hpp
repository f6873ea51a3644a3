#pragma once

#include "hcx/diffusion/assembly.hpp"
#include "hcx/diffusion/csv.hpp"
#include "hcx/diffusion/mesh.hpp"
#include "hcx/diffusion/monotone.hpp"
#include "hcx/diffusion/two_material.hpp"
