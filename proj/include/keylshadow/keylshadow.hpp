// Copyright 2026 The keylshadow Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// Umbrella header: pulls in the whole library.

#pragma once

#include "keylshadow/balanced.hpp"
#include "keylshadow/claims.hpp"
#include "keylshadow/errors.hpp"
#include "keylshadow/gauss_projection.hpp"
#include "keylshadow/linalg.hpp"
#include "keylshadow/oracles.hpp"
#include "keylshadow/parallel.hpp"
#include "keylshadow/random.hpp"
#include "keylshadow/schur_weyl.hpp"
#include "keylshadow/serialize.hpp"
#include "keylshadow/splitting.hpp"
#include "keylshadow/tableaux.hpp"
