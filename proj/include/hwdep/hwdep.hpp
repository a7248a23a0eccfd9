#pragma once

#include "analysis.hpp"
#include "batch_size.hpp"
#include "batch_table.hpp"
#include "counters.hpp"
#include "generators.hpp"
#include "runner.hpp"
#include "transform.hpp"
#include "weight_class.hpp"
#include "word_source.hpp"
