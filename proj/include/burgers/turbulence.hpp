#pragma once

#include "burgers/turbulence/brownian.hpp"
#include "burgers/turbulence/eta.hpp"
#include "burgers/turbulence/stats.hpp"
#include "burgers/turbulence/zeta.hpp"
