// Copyright 2026 The thermofoot Authors
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

#include <string>
#include <vector>

namespace thermo::io {

/// Splits one CSV line. Handles quoted fields with embedded commas and
/// doubled quotes; embedded newlines are not supported (none of our formats
/// need them).
std::vector<std::string> split_csv_line(const std::string& line);

/// Joins fields into a CSV line, quoting where necessary.
std::string join_csv_line(const std::vector<std::string>& fields);

/// Reads a whole CSV file as rows of fields. Skips a UTF-8 BOM if present.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

void write_csv(const std::string& path,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace thermo::io
