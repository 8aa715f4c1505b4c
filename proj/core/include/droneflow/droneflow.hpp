#pragma once

// Umbrella header: the full public surface.

#include "droneflow/aerodata.hpp"
#include "droneflow/analytics.hpp"
#include "droneflow/backend.hpp"
#include "droneflow/calendar.hpp"
#include "droneflow/compute.hpp"
#include "droneflow/config.hpp"
#include "droneflow/csvio.hpp"
#include "droneflow/detector.hpp"
#include "droneflow/environment.hpp"
#include "droneflow/errors.hpp"
#include "droneflow/geometry.hpp"
#include "droneflow/metrics_io.hpp"
#include "droneflow/navigation.hpp"
#include "droneflow/pid.hpp"
#include "droneflow/robot.hpp"
#include "droneflow/runtime.hpp"
#include "droneflow/sensors.hpp"
#include "droneflow/survey.hpp"
#include "droneflow/vision.hpp"
