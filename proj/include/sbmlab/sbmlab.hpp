#pragma once

#include "sbmlab/abp.hpp"
#include "sbmlab/cycles.hpp"
#include "sbmlab/error.hpp"
#include "sbmlab/graph.hpp"
#include "sbmlab/io.hpp"
#include "sbmlab/learner.hpp"
#include "sbmlab/metrics.hpp"
#include "sbmlab/nonbacktracking.hpp"
#include "sbmlab/numeric.hpp"
#include "sbmlab/rng.hpp"
#include "sbmlab/sbm.hpp"
#include "sbmlab/sweep.hpp"
#include "sbmlab/topology.hpp"
#include "sbmlab/typicality.hpp"
