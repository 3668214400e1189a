#pragma once

// Umbrella header for the rate-distortion solver library.

#include "ratedist/ba.hpp"
#include "ratedist/cba.hpp"
#include "ratedist/errors.hpp"
#include "ratedist/io.hpp"
#include "ratedist/kernels.hpp"
#include "ratedist/oracle.hpp"
#include "ratedist/problem.hpp"
#include "ratedist/report.hpp"
#include "ratedist/rootfind.hpp"
#include "ratedist/sources.hpp"
