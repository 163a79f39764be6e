#pragma once

// Everything except the HTTP service and CLI, which pull in extra dependencies.
#include "madeup/ast.hpp"
#include "madeup/ast_print.hpp"
#include "madeup/diagnostic.hpp"
#include "madeup/export.hpp"
#include "madeup/interpreter.hpp"
#include "madeup/lesson.hpp"
#include "madeup/lexer.hpp"
#include "madeup/mesh.hpp"
#include "madeup/parser.hpp"
#include "madeup/pipeline.hpp"
#include "madeup/surface.hpp"
#include "madeup/sweep.hpp"
#include "madeup/turtle.hpp"
#include "madeup/value.hpp"
#include "madeup/vec3.hpp"
