#pragma once

#include <hyperslice/error.hpp>
#include <hyperslice/field.hpp>
#include <hyperslice/irreddetect.hpp>
#include <hyperslice/parallel.hpp>
#include <hyperslice/parse.hpp>
#include <hyperslice/poly.hpp>
#include <hyperslice/projective.hpp>
#include <hyperslice/rational.hpp>
#include <hyperslice/report.hpp>
#include <hyperslice/rng.hpp>
#include <hyperslice/scenario.hpp>
#include <hyperslice/slicestats.hpp>
#include <hyperslice/variety.hpp>
#include <hyperslice/version.hpp>
