#pragma once

#include "qkrein/error.hpp"
#include "qkrein/inner_space.hpp"
#include "qkrein/krein.hpp"
#include "qkrein/linalg.hpp"
#include "qkrein/norms.hpp"
#include "qkrein/qmatrix.hpp"
#include "qkrein/quaternion.hpp"
#include "qkrein/subspace.hpp"
