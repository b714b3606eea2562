#pragma once

#include "rkbench/cardinal.hpp"
#include "rkbench/distribution.hpp"
#include "rkbench/domination.hpp"
#include "rkbench/error.hpp"
#include "rkbench/limitcount.hpp"
#include "rkbench/models.hpp"
#include "rkbench/operators.hpp"
#include "rkbench/pipeline.hpp"
#include "rkbench/preorder.hpp"
#include "rkbench/report.hpp"
#include "rkbench/text_format.hpp"
#include "rkbench/typespace.hpp"
