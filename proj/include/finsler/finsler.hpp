#pragma once

#include "finsler/backend/exact.hpp"
#include "finsler/backend/numeric.hpp"
#include "finsler/classify/defect.hpp"
#include "finsler/classify/rationality.hpp"
#include "finsler/curvature/indicatrix.hpp"
#include "finsler/curvature/residuals.hpp"
#include "finsler/curvature/scalars.hpp"
#include "finsler/curvature/spray.hpp"
#include "finsler/curvature/tower.hpp"
#include "finsler/geometry/fixtures.hpp"
#include "finsler/geometry/sampling.hpp"
#include "finsler/geometry/tensors.hpp"
#include "finsler/io/config.hpp"
#include "finsler/io/report.hpp"
