#pragma once

#include "bimop/errors.hpp"
#include "bimop/scalar.hpp"
#include "bimop/multiindex.hpp"
#include "bimop/matrix.hpp"
#include "bimop/poly.hpp"
#include "bimop/measures.hpp"
#include "bimop/config.hpp"
#include "bimop/mopcore.hpp"
#include "bimop/relations.hpp"
#include "bimop/product.hpp"
#include "bimop/json_io.hpp"
