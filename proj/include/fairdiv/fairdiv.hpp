#pragma once

#include "fairdiv/error.hpp"
#include "fairdiv/graph.hpp"
#include "fairdiv/valuation.hpp"
#include "fairdiv/allocation.hpp"
#include "fairdiv/algorithms.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/instances.hpp"
#include "fairdiv/io.hpp"
