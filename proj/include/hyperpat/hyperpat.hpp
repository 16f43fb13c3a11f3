// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/common.hpp"
#include "hyperpat/conditions.hpp"
#include "hyperpat/demos.hpp"
#include "hyperpat/io.hpp"
#include "hyperpat/lobachevsky.hpp"
#include "hyperpat/minkowski.hpp"
#include "hyperpat/pipeline.hpp"
#include "hyperpat/quadrature.hpp"
#include "hyperpat/reconstruct.hpp"
#include "hyperpat/solver.hpp"
#include "hyperpat/surface_complex.hpp"
#include "hyperpat/svg.hpp"
#include "hyperpat/tetrahedron.hpp"
#include "hyperpat/triangle.hpp"
#include "hyperpat/volume.hpp"
