#pragma once

#include "splitlab/errors.hpp"
#include "splitlab/vector.hpp"
#include "splitlab/functions.hpp"
#include "splitlab/solvers.hpp"
#include "splitlab/certificates.hpp"
#include "splitlab/worstcase.hpp"
#include "splitlab/random_instances.hpp"
#include "splitlab/io.hpp"
#include "splitlab/harness.hpp"
