#ifndef QUADCHROMA_QUADCHROMA_HPP
#define QUADCHROMA_QUADCHROMA_HPP

#include "analytic.hpp"
#include "geom.hpp"
#include "int128.hpp"
#include "lattice.hpp"
#include "montecarlo.hpp"
#include "parallel.hpp"
#include "rule_syntax.hpp"

#endif
