#pragma once

#include "commitdistill/baselines.hpp"
#include "commitdistill/error.hpp"
#include "commitdistill/eval/bench.hpp"
#include "commitdistill/eval/experiments.hpp"
#include "commitdistill/eval/metrics.hpp"
#include "commitdistill/extraction.hpp"
#include "commitdistill/git_ingest.hpp"
#include "commitdistill/retrieval.hpp"
#include "commitdistill/store.hpp"
#include "commitdistill/tokenize.hpp"
