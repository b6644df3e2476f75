#pragma once

#include "octk/mechanics/mechanics.hpp"
#include "octk/mechanics/generator.hpp"
