#pragma once

#include "speclab/compensation.hpp"
#include "speclab/diagnostics.hpp"
#include "speclab/ensemble.hpp"
#include "speclab/field.hpp"
#include "speclab/field_io.hpp"
#include "speclab/gauge.hpp"
#include "speclab/grid.hpp"
#include "speclab/halfharmonic.hpp"
#include "speclab/json_out.hpp"
#include "speclab/lp_decomposition.hpp"
#include "speclab/norms.hpp"
#include "speclab/rng.hpp"
#include "speclab/rotation.hpp"
#include "speclab/sphere.hpp"
#include "speclab/spectral.hpp"
#include "speclab/version.hpp"
