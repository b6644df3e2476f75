#pragma once

#include "octk/control/problems.hpp"
#include "octk/control/pontryagin.hpp"
#include "octk/control/bellman.hpp"
