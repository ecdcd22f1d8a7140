#pragma once

#include "types.hpp"
#include "poly.hpp"
#include "linalg.hpp"
#include "model.hpp"
#include "polyseq.hpp"
#include "rootlab.hpp"
#include "ident.hpp"
#include "ident_general.hpp"
#include "recover.hpp"
#include "io.hpp"
