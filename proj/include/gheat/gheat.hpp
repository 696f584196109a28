#pragma once

/// Umbrella header: the whole toolkit in one include.

#include "gheat/common.hpp"
#include "gheat/csv.hpp"
#include "gheat/curvature.hpp"
#include "gheat/fujita.hpp"
#include "gheat/graph.hpp"
#include "gheat/graph_io.hpp"
#include "gheat/heat_kernel.hpp"
#include "gheat/operators.hpp"
#include "gheat/picard.hpp"
#include "gheat/run.hpp"
#include "gheat/run_config.hpp"
#include "gheat/semilinear.hpp"
#include "gheat/svg.hpp"
