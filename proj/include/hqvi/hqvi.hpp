#pragma once

// Everything except the command-line front end.

#include "hqvi/core.hpp"
#include "hqvi/evaluator.hpp"
#include "hqvi/identities.hpp"
#include "hqvi/insertion_io.hpp"
#include "hqvi/interpolate.hpp"
#include "hqvi/oracles.hpp"
#include "hqvi/serialize.hpp"
#include "hqvi/solver.hpp"
#include "hqvi/system.hpp"
#include "hqvi/verify.hpp"
