// Copyright 2026 The ffprotect Authors
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

// Row-oriented result table with CSV and JSON writers.

#ifndef FFP_TOOLS_TABLE_H
#define FFP_TOOLS_TABLE_H

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace ffp::cli {

/// Empty cells are written as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, double, std::string, bool>;

class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  /// Throws std::invalid_argument when the row width differs from the header.
  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  /// Header row, comma separator, 12 significant digits, LF line endings.
  void write_csv(std::ostream& os) const;
  /// {"metadata": ..., "columns": [...], "rows": [{column: value}, ...]} with CSV-rounded numbers.
  void write_json(std::ostream& os, const nlohmann::ordered_json& metadata) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// printf "%.12g"; non-finite values become an empty string.
std::string format_number(double value);

}  // namespace ffp::cli

#endif  // FFP_TOOLS_TABLE_H
