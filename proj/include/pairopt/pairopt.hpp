#ifndef PAIROPT_PAIROPT_HPP
#define PAIROPT_PAIROPT_HPP

#include "pairopt/equivalence.hpp"
#include "pairopt/error.hpp"
#include "pairopt/harness.hpp"
#include "pairopt/heuristics.hpp"
#include "pairopt/io.hpp"
#include "pairopt/obsphase.hpp"
#include "pairopt/oracle.hpp"
#include "pairopt/pairmat.hpp"
#include "pairopt/random.hpp"

#endif  // PAIROPT_PAIROPT_HPP
