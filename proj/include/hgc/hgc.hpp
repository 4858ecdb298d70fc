#pragma once

// Umbrella header for the container library.

#include "hgc/container.hpp"
#include "hgc/error.hpp"
#include "hgc/hfree.hpp"
#include "hgc/hypergraph.hpp"
#include "hgc/oracle.hpp"
#include "hgc/parallel.hpp"
#include "hgc/random.hpp"
#include "hgc/rational.hpp"
#include "hgc/vertex_set.hpp"
