#pragma once

// Umbrella header.

#include "pid/cli.hpp"
#include "pid/core.hpp"
#include "pid/generators.hpp"
#include "pid/io.hpp"
#include "pid/matching.hpp"
#include "pid/model.hpp"
#include "pid/oracle.hpp"
#include "pid/three_agent.hpp"
