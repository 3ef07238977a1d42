#pragma once

#include "ecac/algorithms.hpp"
#include "ecac/dataset.hpp"
#include "ecac/density.hpp"
#include "ecac/dpc.hpp"
#include "ecac/error.hpp"
#include "ecac/extended_centers.hpp"
#include "ecac/generators.hpp"
#include "ecac/metrics.hpp"
#include "ecac/pipeline.hpp"
#include "ecac/spatial_index.hpp"
