#pragma once

#include "iod/address.hpp"
#include "iod/admission.hpp"
#include "iod/drone.hpp"
#include "iod/element.hpp"
#include "iod/errors.hpp"
#include "iod/fixtures.hpp"
#include "iod/flight_plan.hpp"
#include "iod/geometry.hpp"
#include "iod/interzone.hpp"
#include "iod/log.hpp"
#include "iod/messages.hpp"
#include "iod/metrics.hpp"
#include "iod/planning.hpp"
#include "iod/rng.hpp"
#include "iod/scenario.hpp"
#include "iod/service.hpp"
#include "iod/sim.hpp"
#include "iod/trace.hpp"
#include "iod/trace_check.hpp"
#include "iod/weather.hpp"
#include "iod/zone_graph.hpp"
#include "iod/zsp.hpp"
