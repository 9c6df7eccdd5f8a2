#pragma once

#include "burgers/cli/runner.hpp"
#include "burgers/cli/scenario.hpp"
#include "burgers/cli/svg.hpp"
