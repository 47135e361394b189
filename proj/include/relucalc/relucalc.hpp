#pragma once

// Umbrella header.

#include "relucalc/approx.hpp"
#include "relucalc/calculus.hpp"
#include "relucalc/certificate.hpp"
#include "relucalc/cpwl.hpp"
#include "relucalc/errors.hpp"
#include "relucalc/gadgets.hpp"
#include "relucalc/matrix.hpp"
#include "relucalc/minmax.hpp"
#include "relucalc/network.hpp"
#include "relucalc/regions.hpp"
#include "relucalc/serialize.hpp"
#include "relucalc/simplicial.hpp"
