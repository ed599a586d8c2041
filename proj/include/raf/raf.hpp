#pragma once

#include "core.hpp"
#include "formula.hpp"
#include "io.hpp"
#include "af_semantics.hpp"
#include "logic.hpp"
#include "raf_semantics.hpp"
#include "qbf.hpp"
#include "translators.hpp"
#include "td.hpp"
#include "dg_encodings.hpp"
