#pragma once

#include "qchan/channels.hpp"
#include "qchan/errcorr.hpp"
#include "qchan/infotheory.hpp"
#include "qchan/layout.hpp"
#include "qchan/rng.hpp"
#include "qchan/spectral.hpp"
#include "qchan/states.hpp"
#include "qchan/tensor.hpp"
#include "qchan/types.hpp"
