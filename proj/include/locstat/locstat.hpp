#pragma once

#include "locstat/basis.hpp"
#include "locstat/design.hpp"
#include "locstat/fit.hpp"
#include "locstat/forecast.hpp"
#include "locstat/io.hpp"
#include "locstat/pacf.hpp"
#include "locstat/simulate.hpp"
#include "locstat/stability.hpp"
#include "locstat/study.hpp"
#include "locstat/time_series.hpp"
#include "locstat/tuning.hpp"
