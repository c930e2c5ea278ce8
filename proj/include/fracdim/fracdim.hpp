#pragma once

#include "fracdim/errors.hpp"
#include "fracdim/estimators.hpp"
#include "fracdim/filtration.hpp"
#include "fracdim/fit.hpp"
#include "fracdim/geometry/delaunay.hpp"
#include "fracdim/geometry/predicates.hpp"
#include "fracdim/io.hpp"
#include "fracdim/magnitude.hpp"
#include "fracdim/parallel.hpp"
#include "fracdim/persistence.hpp"
#include "fracdim/rng.hpp"
#include "fracdim/spaces.hpp"
