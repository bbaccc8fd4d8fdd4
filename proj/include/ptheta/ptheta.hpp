#pragma once

#include "ptheta/certified.hpp"
#include "ptheta/claims.hpp"
#include "ptheta/dd.hpp"
#include "ptheta/errors.hpp"
#include "ptheta/evaluate.hpp"
#include "ptheta/identities.hpp"
#include "ptheta/region.hpp"
#include "ptheta/roots.hpp"
#include "ptheta/separation.hpp"
#include "ptheta/series.hpp"
#include "ptheta/spectrum.hpp"
#include "ptheta/tracking.hpp"
#include "ptheta/triple_product.hpp"
