#pragma once

#include "burgers/geometry/caustic.hpp"
#include "burgers/geometry/checks.hpp"
#include "burgers/geometry/double_points.hpp"
#include "burgers/geometry/hotcool.hpp"
#include "burgers/geometry/level.hpp"
#include "burgers/geometry/maxwell.hpp"
#include "burgers/geometry/perestroika.hpp"
