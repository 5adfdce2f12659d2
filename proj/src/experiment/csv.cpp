#include "pbench/experiment/csv.hpp"

#include <set>

#include "pbench/error.hpp"

namespace pbench {

TrialTable::TrialTable(std::vector<std::string> header, std::vector<std::vector<std::string>> rows)
    : header_(std::move(header)), rows_(std::move(rows)) {
  if (header_.empty()) fail(ErrorKind::InvalidInput, "csv: empty header");
  std::set<std::string_view> seen;
  for (const auto& h : header_) {
    if (!seen.insert(h).second) fail(ErrorKind::InvalidInput, "csv: duplicate header column '" + h + "'");
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].size() != header_.size()) {
      fail(ErrorKind::InvalidInput, "csv: ragged row " + std::to_string(r + 1) + ": expected " +
                                        std::to_string(header_.size()) + " fields, got " +
                                        std::to_string(rows_[r].size()));
    }
  }
}

int TrialTable::column(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

bool is_valid_utf8(std::string_view text) noexcept {
  std::size_t i = 0;
  const auto n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) return false;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

namespace {

[[noreturn]] void parse_error(std::size_t record, const std::string& what) {
  fail(ErrorKind::InvalidInput, "csv: row " + std::to_string(record) + ": " + what);
}

}  // namespace

TrialTable parse_trial_table(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  if (text.empty()) fail(ErrorKind::InvalidInput, "csv: empty input");
  if (!is_valid_utf8(text)) fail(ErrorKind::InvalidInput, "csv: input is not valid UTF-8");

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    records.push_back(std::move(record));
    record.clear();
  };

  while (i < n) {
    // start of a field
    if (text[i] == '"') {
      ++i;
      bool closed = false;
      while (i < n) {
        if (text[i] == '"') {
          if (i + 1 < n && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            ++i;
            closed = true;
            break;
          }
        } else {
          field.push_back(text[i++]);
        }
      }
      if (!closed) parse_error(records.size(), "unterminated quoted field");
      if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
        parse_error(records.size(), "unexpected character after closing quote");
      }
    } else {
      while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
        if (text[i] == '"') parse_error(records.size(), "quote inside unquoted field");
        field.push_back(text[i++]);
      }
    }

    if (i == n) {
      end_record();
      break;
    }
    if (text[i] == ',') {
      record.push_back(std::move(field));
      field.clear();
      ++i;
      if (i == n) end_record();  // trailing comma: final empty field
      continue;
    }
    if (text[i] == '\r') {
      if (i + 1 >= n || text[i + 1] != '\n') parse_error(records.size(), "bare carriage return");
      ++i;
    }
    ++i;  // '\n'
    end_record();
  }

  if (records.empty()) fail(ErrorKind::InvalidInput, "csv: empty input");
  std::vector<std::string> header = std::move(records.front());
  records.erase(records.begin());
  if (header.size() == 1 && header[0].empty()) fail(ErrorKind::InvalidInput, "csv: empty header");
  return TrialTable(std::move(header), std::move(records));
}

namespace {

bool needs_quotes(const std::string& f) {
  return f.find_first_of(",\"\r\n") != std::string::npos;
}

void append_field(std::string& out, const std::string& f) {
  if (!needs_quotes(f)) {
    out += f;
    return;
  }
  out.push_back('"');
  for (char c : f) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace

std::string write_csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    append_field(out, fields[i]);
  }
  // A single empty field would otherwise serialize to a blank line.
  if (fields.size() == 1 && fields[0].empty()) out = "\"\"";
  out.push_back('\n');
  return out;
}

std::string write_csv(const TrialTable& table) {
  std::string out = write_csv_row(table.header());
  for (const auto& row : table.rows()) out += write_csv_row(row);
  return out;
}

}  // namespace pbench
