#pragma once

// Counting weighted independent sets in (claw, odd hole)-free and
// (fork, odd hole)-free graphs through clique cutset and modular
// decompositions, with an exact Ryser permanent backend and a
// matchings-chain estimator, validated against brute-force oracles.

#include "wisc/atoms.hpp"
#include "wisc/bipartite.hpp"
#include "wisc/cutset.hpp"
#include "wisc/fork.hpp"
#include "wisc/generate.hpp"
#include "wisc/graph.hpp"
#include "wisc/io.hpp"
#include "wisc/modular.hpp"
#include "wisc/numeric.hpp"
#include "wisc/oracle.hpp"
#include "wisc/permanent.hpp"
#include "wisc/trace.hpp"
