/**
 * @file qir.hpp
 * @brief Umbrella header.
 */
#pragma once

#include "qir/approx.hpp"
#include "qir/baselines.hpp"
#include "qir/bench.hpp"
#include "qir/fixtures.hpp"
#include "qir/isolate.hpp"
#include "qir/numerics.hpp"
#include "qir/parse.hpp"
#include "qir/refine.hpp"
#include "qir/trace_io.hpp"
