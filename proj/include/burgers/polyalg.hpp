#pragma once

#include "burgers/polyalg/algebra.hpp"
#include "burgers/polyalg/polynomial.hpp"
#include "burgers/polyalg/rational_function.hpp"
#include "burgers/polyalg/roots.hpp"
#include "burgers/polyalg/serialize.hpp"
