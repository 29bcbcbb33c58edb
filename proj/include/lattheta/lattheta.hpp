#pragma once

#include "catalog.hpp"
#include "error.hpp"
#include "harmonic.hpp"
#include "io.hpp"
#include "lattice.hpp"
#include "poly.hpp"
#include "qseries.hpp"
#include "rational.hpp"
#include "theta.hpp"
