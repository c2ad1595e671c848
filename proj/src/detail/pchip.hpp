#pragma once

// Boost 1.74's pchip calls isnan unqualified inside its own namespace.
#include <cmath>

namespace boost::math::interpolators {
using std::isnan;
}

#include <boost/math/interpolators/pchip.hpp>
