#pragma once

#include "tamerep/arith.hpp"
#include "tamerep/error.hpp"
#include "tamerep/field.hpp"
#include "tamerep/group.hpp"
#include "tamerep/induce.hpp"
#include "tamerep/matrix.hpp"
#include "tamerep/orthogonal.hpp"
#include "tamerep/subfield.hpp"
#include "tamerep/tame_character.hpp"
