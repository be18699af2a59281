#pragma once

#include "partzdd/chain_diagnostics.hpp"
#include "partzdd/edge_order.hpp"
#include "partzdd/error.hpp"
#include "partzdd/fixtures.hpp"
#include "partzdd/graph.hpp"
#include "partzdd/io.hpp"
#include "partzdd/metrics.hpp"
#include "partzdd/random.hpp"
#include "partzdd/samplers.hpp"
#include "partzdd/validation.hpp"
#include "partzdd/zdd.hpp"
#include "partzdd/zdd_builder.hpp"
#include "partzdd/zdd_query.hpp"
