#pragma once

#include "qheat/linalg.hpp"
#include "qheat/bose.hpp"
#include "qheat/bath.hpp"
#include "qheat/hierarchy.hpp"
#include "qheat/dynamics.hpp"
#include "qheat/spectra.hpp"
#include "qheat/sbet.hpp"
#include "qheat/config.hpp"
#include "qheat/csv.hpp"
#include "qheat/experiment.hpp"
#include "qheat/acceptance.hpp"
