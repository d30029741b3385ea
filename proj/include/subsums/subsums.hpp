#pragma once

#include "subsums/atoms.hpp"
#include "subsums/cdf.hpp"
#include "subsums/classifier.hpp"
#include "subsums/cover.hpp"
#include "subsums/errors.hpp"
#include "subsums/model.hpp"
#include "subsums/model_io.hpp"
#include "subsums/rational.hpp"
#include "subsums/sampler.hpp"
#include "subsums/selftest.hpp"
