#pragma once

#include "unimm/rational.hpp"
#include "unimm/pregraph.hpp"
#include "unimm/complex.hpp"
#include "unimm/canonical.hpp"
#include "unimm/folding.hpp"
#include "unimm/reducibility.hpp"
#include "unimm/presentation.hpp"
#include "unimm/pieces.hpp"
#include "unimm/lp.hpp"
#include "unimm/certify.hpp"
#include "unimm/oracle.hpp"
#include "unimm/serialize.hpp"
