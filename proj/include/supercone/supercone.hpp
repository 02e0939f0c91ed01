#pragma once

#include "supercone/clifford.hpp"
#include "supercone/dynamics.hpp"
#include "supercone/errors.hpp"
#include "supercone/grassmann.hpp"
#include "supercone/measure.hpp"
#include "supercone/random.hpp"
#include "supercone/supermatrix.hpp"
#include "supercone/superforms.hpp"
#include "supercone/two_bit_form.hpp"
#include "supercone/verify.hpp"
