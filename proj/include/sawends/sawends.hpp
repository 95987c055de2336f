#pragma once

// Umbrella header.
#include "sawends/config.hpp"
#include "sawends/cutset.hpp"
#include "sawends/enumerate.hpp"
#include "sawends/errors.hpp"
#include "sawends/finite_group.hpp"
#include "sawends/graph_builders.hpp"
#include "sawends/graph_core.hpp"
#include "sawends/group_presentations.hpp"
#include "sawends/pattern_engine.hpp"
#include "sawends/sampler.hpp"
#include "sawends/saw_engine.hpp"
#include "sawends/surgery.hpp"
#include "sawends/walk.hpp"
