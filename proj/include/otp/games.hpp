#pragma once

#include "otp/games/bbotp.hpp"
#include "otp/games/collapsing.hpp"
#include "otp/games/common.hpp"
#include "otp/games/curve.hpp"
#include "otp/games/forgery.hpp"
