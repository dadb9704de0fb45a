// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/common/errors.hpp"

// Exception types are header-only; this TU anchors the library target.
