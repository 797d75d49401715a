#pragma once

/// \file ruelle.hpp
/// Umbrella header.

#include "ruelle/numerics.hpp"
#include "ruelle/lift_series.hpp"
#include "ruelle/maps.hpp"
#include "ruelle/lifts.hpp"
#include "ruelle/operators.hpp"
#include "ruelle/spectra.hpp"
#include "ruelle/traces.hpp"
#include "ruelle/julia.hpp"
