#pragma once

#include "citefilter/catalog_client.hpp"
#include "citefilter/corpus_io.hpp"
#include "citefilter/count_dist.hpp"
#include "citefilter/doi.hpp"
#include "citefilter/errors.hpp"
#include "citefilter/evaluation.hpp"
#include "citefilter/indicators.hpp"
#include "citefilter/manifest.hpp"
#include "citefilter/percentile.hpp"
#include "citefilter/record.hpp"
#include "citefilter/rng.hpp"
#include "citefilter/svg_plot.hpp"
#include "citefilter/synth.hpp"
#include "citefilter/table_io.hpp"
#include "citefilter/version.hpp"
