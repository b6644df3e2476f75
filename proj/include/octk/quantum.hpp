#pragma once

#include "octk/quantum/system.hpp"
#include "octk/quantum/evolve.hpp"
#include "octk/quantum/phase.hpp"
#include "octk/quantum/stationary.hpp"
#include "octk/quantum/limit.hpp"
#include "octk/quantum/tower.hpp"
