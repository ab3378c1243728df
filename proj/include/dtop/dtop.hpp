#ifndef DTOP_DTOP_HPP
#define DTOP_DTOP_HPP

#include "core.hpp"
#include "group.hpp"
#include "homotopy.hpp"
#include "hspace.hpp"
#include "image.hpp"
#include "io.hpp"
#include "maps.hpp"

#endif
