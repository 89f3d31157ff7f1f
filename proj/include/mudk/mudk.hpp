// SPDX-License-Identifier: Apache-2.0
//! \file mudk/mudk.hpp
//! Umbrella header.
#pragma once

#include "boundary.hpp"
#include "discretize.hpp"
#include "distributions.hpp"
#include "domain_polygon.hpp"
#include "errors.hpp"
#include "gross_map.hpp"
#include "hilbert.hpp"
#include "philox.hpp"
#include "quadrature.hpp"
#include "step_quantile.hpp"
#include "verify_mc.hpp"
