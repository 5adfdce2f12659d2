#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pbench {

/// Header plus string records. Every row has exactly header().size() fields.
class TrialTable {
 public:
  TrialTable() = default;
  /// Throws InvalidInput on duplicate header names or ragged rows.
  TrialTable(std::vector<std::string> header, std::vector<std::vector<std::string>> rows);

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  /// Index of a header column, or -1.
  int column(std::string_view name) const noexcept;

  friend bool operator==(const TrialTable&, const TrialTable&) = default;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// RFC-4180 subset: mandatory header, UTF-8 (BOM tolerated), LF or CRLF record
// separators, double-quote quoting with "" escapes. A trailing newline is
// optional. Errors carry 1-based data-row numbers (the header is row 0).
TrialTable parse_trial_table(std::string_view text);

/// Emits LF-terminated records, quoting only fields that need it.
std::string write_csv(const TrialTable& table);
std::string write_csv_row(const std::vector<std::string>& fields);

bool is_valid_utf8(std::string_view text) noexcept;

}  // namespace pbench
