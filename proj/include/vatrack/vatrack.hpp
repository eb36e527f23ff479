#pragma once

// Umbrella header for the attention-guided proposal filtering and
// multi-object tracking toolkit.

#include "appearance.hpp"
#include "association.hpp"
#include "box.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "hungarian.hpp"
#include "io.hpp"
#include "kalman.hpp"
#include "metrics.hpp"
#include "particles.hpp"
#include "rpfilter.hpp"
#include "synth.hpp"
#include "track.hpp"
#include "tracker.hpp"
#include "types.hpp"
