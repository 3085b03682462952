#pragma once

#include "conelab/types.hpp"
#include "conelab/random.hpp"
#include "conelab/linalg.hpp"
#include "conelab/nnls.hpp"
#include "conelab/double_description.hpp"
#include "conelab/body.hpp"
#include "conelab/cone.hpp"
#include "conelab/sections.hpp"
#include "conelab/duality.hpp"
#include "conelab/properties.hpp"
#include "conelab/constructions.hpp"
#include "conelab/io.hpp"
#include "conelab/harness.hpp"
