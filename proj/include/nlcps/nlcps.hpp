#ifndef NLCPS_NLCPS_HPP
#define NLCPS_NLCPS_HPP

// Umbrella header: the full placement-learning stack.

#include "nlcps/agent.hpp"
#include "nlcps/common.hpp"
#include "nlcps/domain.hpp"
#include "nlcps/evaluate.hpp"
#include "nlcps/io.hpp"
#include "nlcps/net.hpp"
#include "nlcps/reward.hpp"
#include "nlcps/rng.hpp"
#include "nlcps/synth.hpp"
#include "nlcps/training.hpp"

#endif  // NLCPS_NLCPS_HPP
