#pragma once

#include "eocc/dataset.hpp"
#include "eocc/dissimilarity.hpp"
#include "eocc/entropic_graph.hpp"
#include "eocc/error.hpp"
#include "eocc/evaluation.hpp"
#include "eocc/fuzzy.hpp"
#include "eocc/io.hpp"
#include "eocc/matrix.hpp"
#include "eocc/model.hpp"
#include "eocc/synthetic.hpp"
#include "eocc/trainer.hpp"
