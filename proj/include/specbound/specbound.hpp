#pragma once

#include "specbound/bounds.hpp"
#include "specbound/eigen.hpp"
#include "specbound/error.hpp"
#include "specbound/io.hpp"
#include "specbound/linmap.hpp"
#include "specbound/matrix.hpp"
#include "specbound/report.hpp"
