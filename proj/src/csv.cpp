#include "phonoscope/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "phonoscope/error.hpp"

namespace phonoscope {

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return int(i);
  return -1;
}

namespace {

// Splits one logical CSV record starting at `pos`; records may contain
// quoted newlines. Returns false at end of input.
bool next_record(std::string_view text, std::size_t& pos, std::vector<std::string>& fields,
                 std::string_view what, std::size_t& line) {
  fields.clear();
  if (pos >= text.size()) return false;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  while (pos < text.size()) {
    const char c = text[pos];
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          pos += 2;
        } else {
          in_quotes = false;
          ++pos;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
        ++pos;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      ++pos;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      ++pos;
    } else if (c == '\r') {
      ++pos;
    } else if (c == '\n') {
      ++pos;
      ++line;
      break;
    } else {
      field.push_back(c);
      ++pos;
    }
  }
  if (in_quotes)
    fail(ErrorKind::MalformedFile,
         std::string(what) + ": unterminated quote in record ending at line " +
             std::to_string(line));
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

}  // namespace

CsvTable parse_csv(std::string_view text, std::string_view what) {
  CsvTable table;
  std::size_t pos = 0, line = 1;
  std::vector<std::string> fields;
  if (!next_record(text, pos, fields, what, line))
    fail(ErrorKind::MalformedFile, std::string(what) + ": empty CSV (header row is mandatory)");
  table.header = fields;
  while (next_record(text, pos, fields, what, line)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != table.header.size())
      fail(ErrorKind::MalformedFile,
           std::string(what) + ": row ending at line " + std::to_string(line) + " has " +
               std::to_string(fields.size()) + " fields, header has " +
               std::to_string(table.header.size()));
    table.rows.push_back(fields);
  }
  return table;
}

std::string csv_escape(std::string_view field) {
  const bool needs_quotes =
      field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    out.push_back(c);
    if (c == '"') out.push_back('"');
  }
  out.push_back('"');
  return out;
}

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_u64(std::uint64_t v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_double_field(std::string_view field, std::string_view what, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    fail(ErrorKind::MalformedFile,
         std::string(what) + ": row " + std::to_string(line) + ": '" + std::string(field) +
             "' is not a number");
  return v;
}

std::uint64_t parse_u64_field(std::string_view field, std::string_view what, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    fail(ErrorKind::MalformedFile,
         std::string(what) + ": row " + std::to_string(line) + ": '" + std::string(field) +
             "' is not a non-negative integer");
  return v;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::MissingFile, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorKind::Io, "cannot open " + path + " for writing");
  os.write(content.data(), std::streamsize(content.size()));
  if (!os) fail(ErrorKind::Io, "write failed for " + path);
}

}  // namespace phonoscope
