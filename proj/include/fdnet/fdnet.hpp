#pragma once

// Functional dynamic-network embedding: time-varying sending trajectories
// alpha_j(t) in a B-spline basis, static receiving vectors beta_j, logistic
// link model, penalized alternating estimation, planted-cluster synthesis,
// and holdout evaluation.

#include "fdnet/dynamic_network.hpp"
#include "fdnet/evaluation.hpp"
#include "fdnet/kmeans.hpp"
#include "fdnet/model.hpp"
#include "fdnet/parallel.hpp"
#include "fdnet/rng.hpp"
#include "fdnet/serialize.hpp"
#include "fdnet/spline_basis.hpp"
#include "fdnet/synthesis.hpp"
#include "fdnet/trainer.hpp"
