#pragma once

// Umbrella header.

#include "latmc/error.hpp"
#include "latmc/lattice.hpp"
#include "latmc/predicate.hpp"
#include "latmc/syntax.hpp"
#include "latmc/fixpoint.hpp"
#include "latmc/models.hpp"
#include "latmc/fml_eval.hpp"
#include "latmc/execution.hpp"
#include "latmc/ctl_eval.hpp"
#include "latmc/transfer.hpp"
#include "latmc/oracle.hpp"
