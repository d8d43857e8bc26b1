#ifndef TDESIGN_TDESIGN_HPP
#define TDESIGN_TDESIGN_HPP

#include "tdesign/bound.hpp"
#include "tdesign/configuration.hpp"
#include "tdesign/design.hpp"
#include "tdesign/matrix.hpp"
#include "tdesign/moments.hpp"
#include "tdesign/rank.hpp"
#include "tdesign/rigidity.hpp"
#include "tdesign/scalar.hpp"
#include "tdesign/system.hpp"

#endif  // TDESIGN_TDESIGN_HPP
