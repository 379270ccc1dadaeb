#pragma once

#include "recoverlab/core.hpp"
#include "recoverlab/distributions.hpp"
#include "recoverlab/evaluation.hpp"
#include "recoverlab/greedy.hpp"
#include "recoverlab/harness.hpp"
#include "recoverlab/numerics.hpp"
#include "recoverlab/problem.hpp"
#include "recoverlab/registry.hpp"
#include "recoverlab/relaxation.hpp"
#include "recoverlab/solution.hpp"
#include "recoverlab/thresholding.hpp"
