// Copyright 2026 The QoE Metrics Authors. All Rights Reserved.
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

#ifndef QOE_QOE_HPP
#define QOE_QOE_HPP

#include "qoe/analysis.hpp"
#include "qoe/dataset.hpp"
#include "qoe/dataset_io.hpp"
#include "qoe/emodel.hpp"
#include "qoe/estimators.hpp"
#include "qoe/scale.hpp"
#include "qoe/sos_model.hpp"

#endif  // QOE_QOE_HPP
