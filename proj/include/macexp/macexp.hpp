#ifndef MACEXP_MACEXP_HPP
#define MACEXP_MACEXP_HPP

#include "macexp/bounds.hpp"
#include "macexp/classexp.hpp"
#include "macexp/engine.hpp"
#include "macexp/evaluator.hpp"
#include "macexp/ext_real.hpp"
#include "macexp/gallager.hpp"
#include "macexp/model.hpp"
#include "macexp/oracle.hpp"
#include "macexp/paper_example.hpp"

#endif
