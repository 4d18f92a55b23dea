#pragma once

#include "lpdisc/discrim.hpp"
#include "lpdisc/error.hpp"
#include "lpdisc/metrics.hpp"
#include "lpdisc/oracle.hpp"
#include "lpdisc/outcome.hpp"
#include "lpdisc/random.hpp"
#include "lpdisc/synthnet.hpp"
