#pragma once

#include "mdcrt/crt.hpp"
#include "mdcrt/divisibility.hpp"
#include "mdcrt/error.hpp"
#include "mdcrt/freqest.hpp"
#include "mdcrt/intmat.hpp"
#include "mdcrt/lattice.hpp"
#include "mdcrt/random.hpp"
#include "mdcrt/residue.hpp"
#include "mdcrt/robust.hpp"
