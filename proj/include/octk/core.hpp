#pragma once

#include "octk/core/errors.hpp"
#include "octk/core/grid.hpp"
#include "octk/core/field.hpp"
#include "octk/core/types.hpp"
#include "octk/core/finite_diff.hpp"
#include "octk/core/interpolate.hpp"
#include "octk/core/tridiagonal.hpp"
#include "octk/core/integrate.hpp"
#include "octk/core/optimize.hpp"
#include "octk/core/root_find.hpp"
#include "octk/core/unwrap.hpp"
#include "octk/core/residual.hpp"
#include "octk/core/action.hpp"
