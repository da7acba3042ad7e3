#pragma once

#include "qws/builders.hpp"
#include "qws/defs.hpp"
#include "qws/format.hpp"
#include "qws/graph.hpp"
#include "qws/io.hpp"
#include "qws/poly.hpp"
#include "qws/prune.hpp"
#include "qws/response.hpp"
#include "qws/scatter.hpp"
#include "qws/sounding.hpp"
