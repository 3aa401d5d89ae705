#pragma once

#include "freundgeo/distribution.hpp"
#include "freundgeo/geometry.hpp"
#include "freundgeo/immersion.hpp"
#include "freundgeo/io.hpp"
#include "freundgeo/linalg.hpp"
#include "freundgeo/oracle.hpp"
#include "freundgeo/params.hpp"
#include "freundgeo/quadrature.hpp"
#include "freundgeo/stochastic.hpp"
#include "freundgeo/submanifolds.hpp"
#include "freundgeo/tensors.hpp"
#include "freundgeo/verify.hpp"
