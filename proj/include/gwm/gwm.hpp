#pragma once

#include "gwm/adversary.hpp"
#include "gwm/bit_vector.hpp"
#include "gwm/distance.hpp"
#include "gwm/dk2.hpp"
#include "gwm/edge_list_io.hpp"
#include "gwm/experiment.hpp"
#include "gwm/graph.hpp"
#include "gwm/key_values.hpp"
#include "gwm/parallel.hpp"
#include "gwm/powerlaw_fit.hpp"
#include "gwm/random_models.hpp"
#include "gwm/rng.hpp"
#include "gwm/separation.hpp"
#include "gwm/watermark.hpp"
