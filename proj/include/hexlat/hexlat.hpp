#pragma once

#include "hexlat/geometry.hpp"
#include "hexlat/kernel.hpp"
#include "hexlat/moduli.hpp"
#include "hexlat/perturbation.hpp"
#include "hexlat/shells.hpp"
#include "hexlat/variational.hpp"
#include "hexlat/verify.hpp"
