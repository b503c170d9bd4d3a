#pragma once

// Everything at once. Individual headers can be included on their own.

#include "swb/error.hpp"
#include "swb/embeddings.hpp"
#include "swb/text/document.hpp"
#include "swb/text/tokenize.hpp"
#include "swb/summarizers/cluster.hpp"
#include "swb/summarizers/featuresum.hpp"
#include "swb/summarizers/textrank.hpp"
#include "swb/measures/builtin.hpp"
#include "swb/overlap.hpp"
#include "swb/plugin/builtin.hpp"
#include "swb/plugin/client.hpp"
#include "swb/plugin/conformance.hpp"
#include "swb/plugin/registry.hpp"
#include "swb/plugin/server.hpp"
#include "swb/eval/dataset.hpp"
#include "swb/eval/export.hpp"
#include "swb/eval/run.hpp"
#include "swb/eval/stats.hpp"
#include "swb/eval/store.hpp"
#include "swb/service/service.hpp"
