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

#include "plantpulse/store/csv.h"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "plantpulse/domain/error.h"

namespace plantpulse::store {

std::string csv_escape(std::string_view field) {
  bool quote = field.empty() || field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!quote) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_line(const CsvRecord& record) {
  std::string line;
  for (std::size_t i = 0; i < record.size(); ++i) {
    if (i) line += ',';
    if (record[i]) line += csv_escape(*record[i]);
  }
  line += "\r\n";
  return line;
}

std::vector<CsvRecord> parse_csv(std::string_view text) {
  std::vector<CsvRecord> records;
  CsvRecord record;
  std::string field;
  bool quoted = false;     // field was opened with a quote
  bool in_quotes = false;  // currently inside the quoted section
  bool field_started = false;

  auto end_field = [&] {
    if (quoted || !field.empty()) {
      record.emplace_back(field);
    } else {
      record.emplace_back(std::nullopt);
    }
    field.clear();
    quoted = false;
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      if (field_started) {
        throw InvalidArgument("stray quote at byte " + std::to_string(i));
      }
      quoted = in_quotes = field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
    } else {
      if (quoted) throw InvalidArgument("data after closing quote at byte " + std::to_string(i));
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) throw InvalidArgument("unterminated quoted field");
  if (field_started || quoted || !record.empty()) end_record();
  return records;
}

namespace {

std::string format_decimal(double d) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), d);
  return std::string(buf.data(), end);
}

std::optional<std::string> cell_text(const ColumnVector& c, std::size_t i) {
  if (c.null_at(i)) return std::nullopt;
  switch (c.type) {
    case ColumnType::kInt64:
    case ColumnType::kTimestamp:
      return std::to_string(c.ints[i]);
    case ColumnType::kDecimal:
      return format_decimal(c.decimals[i]);
    case ColumnType::kText:
      return std::string(c.texts[i]);
  }
  return std::nullopt;
}

Value parse_cell(const std::optional<std::string>& text, const ColumnSchema& col,
                 std::size_t line) {
  if (!text) return {};
  const std::string& s = *text;
  auto bad = [&] {
    return InvalidArgument("line " + std::to_string(line) + ": bad " +
                           std::string(to_string(col.type)) + " value '" + s + "' for " + col.name);
  };
  switch (col.type) {
    case ColumnType::kText:
      return s;
    case ColumnType::kInt64:
    case ColumnType::kTimestamp: {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) throw bad();
      return v;
    }
    case ColumnType::kDecimal: {
      double v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) throw bad();
      return v;
    }
  }
  return {};
}

}  // namespace

void write_table_csv(std::ostream& out, const Store& store, const Snapshot& snap,
                     std::string_view table) {
  const TableSchema& schema = store.schema(table);
  std::vector<std::string> names;
  CsvRecord header;
  for (const auto& c : schema.columns) {
    names.push_back(c.name);
    header.emplace_back(c.name);
  }
  out << csv_line(header);
  ColumnBatch batch = store.scan(snap, table, names);
  CsvRecord record(names.size());
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c) record[c] = cell_text(batch.columns[c], r);
    out << csv_line(record);
  }
}

void export_csv(const Store& store, const Snapshot& snap, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& t : store.catalog().tables()) {
    auto path = dir / (t.name + ".csv");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_table_csv(out, store, snap, t.name);
    if (!out) throw std::runtime_error("write failed for " + path.string());
  }
}

std::uint64_t import_csv(Store& store, const std::filesystem::path& dir) {
  constexpr std::size_t kBatchRows = 10'000;
  std::uint64_t loaded = 0;
  for (const auto& t : store.catalog().tables()) {
    auto path = dir / (t.name + ".csv");
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    auto records = parse_csv(buf.str());
    if (records.empty()) continue;
    const auto& header = records.front();
    if (header.size() != t.columns.size()) {
      throw InvalidArgument(path.string() + ": header does not match " + t.name);
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (!header[c] || *header[c] != t.columns[c].name) {
        throw InvalidArgument(path.string() + ": unexpected column " + header[c].value_or(""));
      }
    }
    std::vector<Row> rows;
    for (std::size_t r = 1; r < records.size(); ++r) {
      const auto& rec = records[r];
      if (rec.size() != t.columns.size()) {
        throw InvalidArgument(path.string() + ": line " + std::to_string(r + 1) + " has " +
                              std::to_string(rec.size()) + " fields");
      }
      Row row;
      row.reserve(rec.size());
      for (std::size_t c = 0; c < rec.size(); ++c) row.push_back(parse_cell(rec[c], t.columns[c], r + 1));
      rows.push_back(std::move(row));
      if (rows.size() == kBatchRows) {
        store.append(t.name, rows);
        loaded += rows.size();
        rows.clear();
      }
    }
    if (!rows.empty()) {
      store.append(t.name, rows);
      loaded += rows.size();
    }
  }
  return loaded;
}

}  // namespace plantpulse::store
