#pragma once

// Umbrella header: the full two-qubit interferometer toolkit.

#include "qmzi/channels.hpp"
#include "qmzi/char_poly.hpp"
#include "qmzi/complex_matrix.hpp"
#include "qmzi/csv.hpp"
#include "qmzi/datasets.hpp"
#include "qmzi/density_matrix.hpp"
#include "qmzi/interferometer.hpp"
#include "qmzi/measures.hpp"
#include "qmzi/puredim.hpp"
#include "qmzi/rng.hpp"
#include "qmzi/spectrum.hpp"
#include "qmzi/tolerances.hpp"
#include "qmzi/verify.hpp"
