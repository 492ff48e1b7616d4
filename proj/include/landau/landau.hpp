#pragma once

#include "landau/error.hpp"
#include "landau/dyadic.hpp"
#include "landau/approx.hpp"
#include "landau/box.hpp"
#include "landau/schedule.hpp"
#include "landau/stream.hpp"
#include "landau/series.hpp"
#include "landau/bounds.hpp"
#include "landau/parallel.hpp"
#include "landau/grid.hpp"
#include "landau/landau_bound.hpp"
#include "landau/search.hpp"
