// Copyright 2026 The UniPAN Authors. All Rights Reserved.
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

#pragma once

#include "unipan/diagnostics.hpp"
#include "unipan/metrics.hpp"
#include "unipan/normal.hpp"
#include "unipan/numfmt.hpp"
#include "unipan/pipeline.hpp"
#include "unipan/raster.hpp"
#include "unipan/raster_io.hpp"
#include "unipan/resample.hpp"
#include "unipan/sampling.hpp"
#include "unipan/transform.hpp"
#include "unipan/transform_io.hpp"
#include "unipan/transport.hpp"
