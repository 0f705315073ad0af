#pragma once

#include "lcrit/arith/characters.hpp"
#include "lcrit/arith/li.hpp"
#include "lcrit/arith/phase.hpp"
#include "lcrit/arith/primes.hpp"
#include "lcrit/errors.hpp"
#include "lcrit/eulerphase.hpp"
#include "lcrit/eulerphase/ledger.hpp"
#include "lcrit/gammaphase.hpp"
#include "lcrit/lfunction.hpp"
#include "lcrit/numeric.hpp"
#include "lcrit/spoint.hpp"
