#pragma once

#include "field.hpp"
#include "quiver.hpp"
#include "crystal.hpp"
#include "string_model.hpp"
#include "orbits.hpp"
#include "geometric.hpp"
#include "ss_checker.hpp"
#include "schubert.hpp"
#include "verify.hpp"
#include "xcheck.hpp"
#include "io.hpp"
