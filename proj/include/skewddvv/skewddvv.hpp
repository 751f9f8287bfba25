#pragma once

#include "skewddvv/canonical.hpp"
#include "skewddvv/compound.hpp"
#include "skewddvv/errors.hpp"
#include "skewddvv/inequality.hpp"
#include "skewddvv/jacobi.hpp"
#include "skewddvv/matrix.hpp"
#include "skewddvv/optimize.hpp"
#include "skewddvv/parallel.hpp"
#include "skewddvv/random.hpp"
#include "skewddvv/skew.hpp"
#include "skewddvv/submersion.hpp"
#include "skewddvv/verify.hpp"
