// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "bwtx/analysis.hpp"
#include "bwtx/error.hpp"
#include "bwtx/matrix_view.hpp"
#include "bwtx/ordering.hpp"
#include "bwtx/session.hpp"
#include "bwtx/suffix_array.hpp"
#include "bwtx/text.hpp"
#include "bwtx/transform.hpp"
