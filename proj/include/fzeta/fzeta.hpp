#pragma once

#include "fzeta/analysis.hpp"
#include "fzeta/common.hpp"
#include "fzeta/core.hpp"
#include "fzeta/forms.hpp"
#include "fzeta/json_io.hpp"
#include "fzeta/quasiperiodic.hpp"
#include "fzeta/rational.hpp"
#include "fzeta/spectral.hpp"
#include "fzeta/tube.hpp"
#include "fzeta/zeta.hpp"
