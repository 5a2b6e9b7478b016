#pragma once

#include "didolocus/asymptotics.hpp"
#include "didolocus/audit.hpp"
#include "didolocus/error.hpp"
#include "didolocus/expmap_conjugate.hpp"
#include "didolocus/geodesic_flow.hpp"
#include "didolocus/io.hpp"
#include "didolocus/locus_classifier.hpp"
#include "didolocus/metric_model.hpp"
#include "didolocus/stratification.hpp"
