#pragma once

#include "seqtag/conll.hpp"
#include "seqtag/core.hpp"
#include "seqtag/crf.hpp"
#include "seqtag/dynamics.hpp"
#include "seqtag/eval.hpp"
#include "seqtag/lattice.hpp"
#include "seqtag/lattice_io.hpp"
#include "seqtag/tags.hpp"
