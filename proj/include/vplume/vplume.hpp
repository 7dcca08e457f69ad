#pragma once

#include "vplume/batch.hpp"
#include "vplume/color.hpp"
#include "vplume/error.hpp"
#include "vplume/estimation.hpp"
#include "vplume/filter.hpp"
#include "vplume/image.hpp"
#include "vplume/image_io.hpp"
#include "vplume/metrics.hpp"
#include "vplume/pipeline.hpp"
#include "vplume/trace_json.hpp"
#include "vplume/vp_model.hpp"
