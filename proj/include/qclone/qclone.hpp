#pragma once

#include "qclone/bases.hpp"
#include "qclone/channel.hpp"
#include "qclone/cloners.hpp"
#include "qclone/compose.hpp"
#include "qclone/core.hpp"
#include "qclone/oracle_mc.hpp"
#include "qclone/rng.hpp"
#include "qclone/sdp.hpp"
#include "qclone/symmetry.hpp"
