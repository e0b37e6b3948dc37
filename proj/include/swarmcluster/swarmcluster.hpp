#pragma once

// Umbrella header: subtractive-clustering seeding, boundary-restricted
// adaptive PSO, partitional clustering on top of both, and the evaluation
// machinery around them.

#include "swarmcluster/benchmarks.hpp"
#include "swarmcluster/bounds.hpp"
#include "swarmcluster/clustering.hpp"
#include "swarmcluster/dataset.hpp"
#include "swarmcluster/harness.hpp"
#include "swarmcluster/matrix.hpp"
#include "swarmcluster/metrics.hpp"
#include "swarmcluster/pso.hpp"
#include "swarmcluster/rng.hpp"
#include "swarmcluster/subtractive.hpp"
