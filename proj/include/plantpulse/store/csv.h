// Copyright 2026 The PlantPulse Authors
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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plantpulse/store/store.h"

namespace plantpulse::store {

// CSV per RFC 4180. A header row carries the column names; an empty unquoted
// field is NULL and a quoted empty field ("") is the empty string.
// Timestamps are integer milliseconds, decimals the shortest round-trip form.

using CsvRecord = std::vector<std::optional<std::string>>;

/// Quotes when the field contains a comma, quote, CR or LF, or is empty.
std::string csv_escape(std::string_view field);

std::string csv_line(const CsvRecord& record);

/// Throws InvalidArgument on an unterminated quote or stray quote.
std::vector<CsvRecord> parse_csv(std::string_view text);

void write_table_csv(std::ostream& out, const Store& store, const Snapshot& snap,
                     std::string_view table);

/// Writes <dir>/<TABLE>.csv for every table. Throws std::runtime_error when the
/// directory cannot be created or a file cannot be written.
void export_csv(const Store& store, const Snapshot& snap, const std::filesystem::path& dir);

/// Appends every <TABLE>.csv found in dir to the store's tables, in catalog
/// order. Missing files leave the table empty. Returns rows loaded.
std::uint64_t import_csv(Store& store, const std::filesystem::path& dir);

}  // namespace plantpulse::store
