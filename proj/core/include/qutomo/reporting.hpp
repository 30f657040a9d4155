// Copyright 2026 The qutomo Authors
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

#include <string>
#include <vector>

namespace qutomo {

/// One aggregated sweep point: CNN and Stokes test fidelities (mean and one
/// standard deviation over repetitions) plus the wall-clock cost of
/// computing the point.
struct ResultRow {
    double swept = 0.0;
    double cnn_mean = 0.0;
    double cnn_std = 0.0;
    double stokes_mean = 0.0;
    double stokes_std = 0.0;
    double seconds = 0.0;
};

/// Column header shared by every results CSV.
inline constexpr const char* kResultCsvHeader =
    "swept,cnn_mean,cnn_std,stokes_mean,stokes_std,seconds";

/// Write rows as CSV (fixed "%.10g" formatting, "%.3f" for seconds, so a
/// rerun with identical values produces identical bytes).
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

/// Write <stem>.csv and <stem>.svg: a standalone line chart of the CNN and
/// Stokes series with one-standard-deviation error bars. Throws
/// InvalidArgument on empty rows; no file is created in that case.
void emit_plot(const std::vector<ResultRow>& rows, const std::string& stem);

}  // namespace qutomo
