#pragma once

#include "gectag/core_types.hpp"
#include "gectag/edit2seq.hpp"
#include "gectag/eval.hpp"
#include "gectag/lexicon.hpp"
#include "gectag/multihead_labels.hpp"
#include "gectag/noiser.hpp"
#include "gectag/parallel.hpp"
#include "gectag/random.hpp"
#include "gectag/seq2edit.hpp"
#include "gectag/toy_tagger.hpp"
