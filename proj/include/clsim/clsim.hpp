#pragma once

#include "clsim/config.hpp"
#include "clsim/content_store.hpp"
#include "clsim/error.hpp"
#include "clsim/metrics.hpp"
#include "clsim/model.hpp"
#include "clsim/policy.hpp"
#include "clsim/replay.hpp"
#include "clsim/router.hpp"
#include "clsim/simulator.hpp"
#include "clsim/sweep.hpp"
#include "clsim/topology.hpp"
#include "clsim/trail.hpp"
#include "clsim/workload.hpp"
