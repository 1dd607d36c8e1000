#pragma once

// Umbrella header: the numerical core in dependency order.  The CSV/JSON
// layer (io.hpp) is not pulled in here because it depends on the vendored
// json.hpp; include it separately where serialization is needed.

#include "fhk/error.hpp"
#include "fhk/linalg.hpp"
#include "fhk/specfun.hpp"
#include "fhk/finsler.hpp"
#include "fhk/constants.hpp"
#include "fhk/extremal.hpp"
#include "fhk/quadrature.hpp"
#include "fhk/verify.hpp"
