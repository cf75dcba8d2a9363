// SPDX-License-Identifier: Apache-2.0
//
// hmimo - hybrid millimeter-wave multiuser MIMO link-level simulator
// Copyright (C) 2026 The hmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HMIMO_HMIMO_HPP
#define HMIMO_HMIMO_HPP

#include "array_geometry.hpp"
#include "bounds.hpp"
#include "channel_model.hpp"
#include "common.hpp"
#include "estimation.hpp"
#include "experiments.hpp"
#include "io.hpp"
#include "precoding.hpp"
#include "random.hpp"

#endif
