// Copyright 2026 The Overlap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "overlap/analysis.hpp"

namespace overlap {

// One row per (model, cutoff); fractions are written unrounded.
std::string tables_csv(std::span<const PartitionReport> reports);
// Column-aligned text table with percentages; significant rows are starred.
std::string tables_txt(std::span<const PartitionReport> reports);
std::string curve_csv(std::span<const OverlapCurve> curves);
// Fixed-size line chart of % overlap against the cutoff, one polyline and
// marker set per curve.
std::string curve_svg(std::span<const OverlapCurve> curves);

// Writes tables.csv, tables.txt, curve.csv and curve.svg atomically. Either
// span may be empty, in which case the corresponding files are skipped.
void emit_report(std::span<const PartitionReport> reports, std::span<const OverlapCurve> curves,
                 const std::filesystem::path& out_dir);

}  // namespace overlap
