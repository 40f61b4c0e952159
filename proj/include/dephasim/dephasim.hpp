// dephasim.hpp — umbrella header

#pragma once

#include "dephasim/analysis.hpp"
#include "dephasim/bath.hpp"
#include "dephasim/channels.hpp"
#include "dephasim/dfs.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/oracle.hpp"
#include "dephasim/register.hpp"
#include "dephasim/version.hpp"
