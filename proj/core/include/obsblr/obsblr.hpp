#pragma once

#include "obsblr/analytic.hpp"
#include "obsblr/errors.hpp"
#include "obsblr/math.hpp"
#include "obsblr/qos.hpp"
#include "obsblr/sim.hpp"
