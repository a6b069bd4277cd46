#ifndef CONEMIN_CONEMIN_HPP
#define CONEMIN_CONEMIN_HPP

#include "conemin/area_functionals.hpp"
#include "conemin/competitors.hpp"
#include "conemin/cone_geometry.hpp"
#include "conemin/density.hpp"
#include "conemin/errors.hpp"
#include "conemin/phase_scan.hpp"
#include "conemin/quadrature.hpp"
#include "conemin/radial_profile.hpp"
#include "conemin/shooting.hpp"
#include "conemin/stability.hpp"

#endif // CONEMIN_CONEMIN_HPP
