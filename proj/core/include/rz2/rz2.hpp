// Umbrella header.
#pragma once

#include "rz2/charfn.hpp"
#include "rz2/errors.hpp"
#include "rz2/fd.hpp"
#include "rz2/forms.hpp"
#include "rz2/group.hpp"
#include "rz2/mc.hpp"
#include "rz2/parallel.hpp"
#include "rz2/seeding.hpp"
#include "rz2/z2.hpp"
