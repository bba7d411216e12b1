#pragma once

#include "wgqed/analytic.hpp"
#include "wgqed/config.hpp"
#include "wgqed/dde.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/expr.hpp"
#include "wgqed/linalg.hpp"
#include "wgqed/observables.hpp"
#include "wgqed/presets.hpp"
#include "wgqed/runner.hpp"
#include "wgqed/scenarios.hpp"
#include "wgqed/validation.hpp"
#include "wgqed/waveguide.hpp"
