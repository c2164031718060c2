#pragma once

#include "milner/relations.hpp"
#include "milner/semantics.hpp"
#include "milner/syntax.hpp"
#include "milner/trees.hpp"
#include "milner/wka.hpp"
