#pragma once

#include "resound/budget.hpp"
#include "resound/builtin.hpp"
#include "resound/closed_sets.hpp"
#include "resound/cover.hpp"
#include "resound/errors.hpp"
#include "resound/io.hpp"
#include "resound/minsky.hpp"
#include "resound/net.hpp"
#include "resound/random.hpp"
#include "resound/reach.hpp"
#include "resound/search.hpp"
#include "resound/soundness.hpp"
#include "resound/structure.hpp"
