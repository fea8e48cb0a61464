#ifndef SIGKER_SIGKER_HPP
#define SIGKER_SIGKER_HPP

#include "sigker/errors.hpp"
#include "sigker/tensor_algebra.hpp"
#include "sigker/path_lift.hpp"
#include "sigker/goursat.hpp"
#include "sigker/oracle.hpp"
#include "sigker/harness.hpp"
#include "sigker/io.hpp"

#endif  // SIGKER_SIGKER_HPP
