#ifndef RATEMETA_RATEMETA_HPP
#define RATEMETA_RATEMETA_HPP

#include "ratemeta/analytics.hpp"
#include "ratemeta/ccdf.hpp"
#include "ratemeta/experiments.hpp"
#include "ratemeta/mark_law.hpp"
#include "ratemeta/params.hpp"
#include "ratemeta/quadrature.hpp"
#include "ratemeta/simulator.hpp"
#include "ratemeta/special_math.hpp"

#endif
