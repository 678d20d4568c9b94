#pragma once

#include "qutrit/assignment.hpp"
#include "qutrit/bloch.hpp"
#include "qutrit/errors.hpp"
#include "qutrit/integrator.hpp"
#include "qutrit/maxent.hpp"
#include "qutrit/priors.hpp"
#include "qutrit/region.hpp"
