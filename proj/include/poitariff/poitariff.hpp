#pragma once

#include "poitariff/csv.hpp"
#include "poitariff/numeric.hpp"
#include "poitariff/oracle.hpp"
#include "poitariff/scenario.hpp"
#include "poitariff/sensitivity.hpp"
#include "poitariff/stage3.hpp"
#include "poitariff/tariff.hpp"
#include "poitariff/types.hpp"
#include "poitariff/uncertainty.hpp"
#include "poitariff/venue.hpp"
