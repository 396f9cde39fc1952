#pragma once

#include "optomech/params.hpp"
#include "optomech/config.hpp"
#include "optomech/working_point.hpp"
#include "optomech/dynamics.hpp"
#include "optomech/steady.hpp"
#include "optomech/quantum.hpp"
#include "optomech/sweep.hpp"
#include "optomech/csv.hpp"
#include "optomech/figures.hpp"
