// Copyright 2026 The dbcfr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dbcfr/dataset.hpp"
#include "dbcfr/dbc.hpp"
#include "dbcfr/dwt.hpp"
#include "dbcfr/error.hpp"
#include "dbcfr/eval.hpp"
#include "dbcfr/grid.hpp"
#include "dbcfr/image_io.hpp"
#include "dbcfr/matcher.hpp"
#include "dbcfr/pipeline.hpp"
#include "dbcfr/preprocess.hpp"
