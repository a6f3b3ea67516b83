// Copyright 2026 The qnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QNOISE_QNOISE_HPP
#define QNOISE_QNOISE_HPP

#include "qnoise/distributed.hpp"
#include "qnoise/errors.hpp"
#include "qnoise/figures.hpp"
#include "qnoise/fock_oracle.hpp"
#include "qnoise/gaussian_core.hpp"
#include "qnoise/haloscope.hpp"
#include "qnoise/measurements.hpp"
#include "qnoise/oracle_check.hpp"
#include "qnoise/parallel.hpp"
#include "qnoise/qfi_closed_form.hpp"
#include "qnoise/quadrature.hpp"
#include "qnoise/special_functions.hpp"

#endif
