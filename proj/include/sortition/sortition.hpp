#pragma once

// Committee voting rules on binary multi-issue profiles: exact and Monte Carlo
// expected social cost, approximation ratios, adversarial profile generators,
// and the closed-form bound calculators.

#include "sortition/bigint.hpp"
#include "sortition/bounds.hpp"
#include "sortition/caps.hpp"
#include "sortition/errors.hpp"
#include "sortition/exact.hpp"
#include "sortition/hypergeom.hpp"
#include "sortition/json_io.hpp"
#include "sortition/metrics.hpp"
#include "sortition/montecarlo.hpp"
#include "sortition/parallel.hpp"
#include "sortition/profile.hpp"
#include "sortition/rng.hpp"
#include "sortition/rules.hpp"
