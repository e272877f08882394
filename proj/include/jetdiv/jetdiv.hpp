#ifndef JETDIV_JETDIV_HPP
#define JETDIV_JETDIV_HPP

#include <jetdiv/corpus.hpp>
#include <jetdiv/elementary.hpp>
#include <jetdiv/error.hpp>
#include <jetdiv/eval.hpp>
#include <jetdiv/expr.hpp>
#include <jetdiv/jet.hpp>
#include <jetdiv/oracle.hpp>
#include <jetdiv/parser.hpp>
#include <jetdiv/symbolic.hpp>
#include <jetdiv/toeplitz.hpp>

#endif
