#include "ksalg/dataset.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace ksalg {

void Dataset::add(std::span<const double> frame, Label label) {
  if (frame.size() != width_) {
    throw std::invalid_argument("frame width " + std::to_string(frame.size()) + " != dataset width " +
                                std::to_string(width_));
  }
  for (double v : frame) {
    if (!std::isfinite(v)) throw std::invalid_argument("frame entries must be finite");
  }
  values_.insert(values_.end(), frame.begin(), frame.end());
  labels_.push_back(label);
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::logic_error("number formatting failed");
  return std::string(buf, end);
}

std::string write_dataset_csv(const Dataset& data) {
  std::string out = "label";
  for (std::size_t c = 0; c < data.width(); ++c) out += ",ch" + std::to_string(c);
  out += '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    out += std::to_string(static_cast<int>(data.label(i)));
    for (double v : data.frame(i)) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    std::string_view f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    fields.push_back(f);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_number(std::string_view field, double& out) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return !field.empty() && ec == std::errc{} && ptr == field.data() + field.size() && std::isfinite(out);
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

}  // namespace

Dataset read_dataset_csv(std::string_view text) {
  auto lines = lines_of(text);
  if (lines.empty()) throw FormatError("dataset is empty (missing header)");
  auto header = split_fields(lines[0]);
  if (header.size() < 2 || header[0] != "label") throw FormatError("dataset header must be label,ch0,...");
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c] != "ch" + std::to_string(c - 1)) {
      throw FormatError("unexpected header column '" + std::string(header[c]) + "'");
    }
  }
  Dataset data(header.size() - 1);
  std::vector<double> frame(data.width());
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto fields = split_fields(lines[li]);
    const std::string where = "line " + std::to_string(li + 1) + ": ";
    if (fields.size() != header.size()) throw FormatError(where + "wrong number of columns");
    Label label;
    if (fields[0] == "1") {
      label = Label::Class1;
    } else if (fields[0] == "2") {
      label = Label::Class2;
    } else {
      throw FormatError(where + "label must be 1 or 2");
    }
    for (std::size_t c = 0; c < data.width(); ++c) {
      if (!parse_number(fields[c + 1], frame[c])) {
        throw FormatError(where + "malformed number '" + std::string(fields[c + 1]) + "'");
      }
    }
    data.add(frame, label);
  }
  return data;
}

std::vector<std::vector<double>> read_frame_rows(std::string_view text) {
  auto lines = lines_of(text);
  std::vector<std::vector<double>> rows;
  bool drop_label = false;
  std::size_t first = 0;
  if (!lines.empty()) {
    auto head = split_fields(lines[0]);
    double probe = 0.0;
    if (!parse_number(head[0], probe)) {
      drop_label = head[0] == "label";
      first = 1;
    }
  }
  for (std::size_t li = first; li < lines.size(); ++li) {
    auto fields = split_fields(lines[li]);
    std::vector<double> row;
    for (std::size_t c = drop_label ? 1 : 0; c < fields.size(); ++c) {
      double v = 0.0;
      if (!parse_number(fields[c], v)) {
        throw FormatError("line " + std::to_string(li + 1) + ": malformed number '" + std::string(fields[c]) + "'");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError("line " + std::to_string(li + 1) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ksalg
