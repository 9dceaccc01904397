#pragma once

#include "phh/central_map.hpp"
#include "phh/equilibrium.hpp"
#include "phh/errors.hpp"
#include "phh/horseshoe.hpp"
#include "phh/ifs.hpp"
#include "phh/params.hpp"
#include "phh/transfer.hpp"
#include "phh/verify.hpp"
#include "phh/version.hpp"
#include "phh/words.hpp"
