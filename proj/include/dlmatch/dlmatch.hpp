#pragma once

#include "dlmatch/cover/batching.hpp"
#include "dlmatch/cover/certificate.hpp"
#include "dlmatch/cover/lp.hpp"
#include "dlmatch/cover/mask.hpp"
#include "dlmatch/cover/simplex.hpp"
#include "dlmatch/cover/transforms.hpp"
#include "dlmatch/departures.hpp"
#include "dlmatch/engine.hpp"
#include "dlmatch/gallery.hpp"
#include "dlmatch/generators.hpp"
#include "dlmatch/graph.hpp"
#include "dlmatch/hungarian.hpp"
#include "dlmatch/instance_io.hpp"
#include "dlmatch/matching.hpp"
#include "dlmatch/policies.hpp"
#include "dlmatch/rational.hpp"
#include "dlmatch/report.hpp"
