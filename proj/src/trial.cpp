#include "mqssd/trial.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "mqssd/errors.hpp"

namespace mqssd {

std::string format_double(double value) {
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
    throw SchemaError("malformed number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t value = 0;
  auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
    throw SchemaError("malformed integer: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

}  // namespace

void write_trial_csv_header(std::ostream& out) {
  out << kTrialCsvHeader << '\n';
}

void write_trial_csv_row(std::ostream& out, const TrialRecord& record) {
  out << record.device_label << ',' << to_string(record.op) << ',' << record.k
      << ',' << record.random_accesses << ','
      << format_double(record.r_fraction) << ',' << record.per_worker_bytes
      << ',' << format_double(record.elapsed_us) << ','
      << format_double(record.throughput_bytes_per_us) << ','
      << record.repetition << ',' << record.seed << ',' << record.status
      << '\n';
}

void write_trial_csv(std::ostream& out, std::span<const TrialRecord> records) {
  write_trial_csv_header(out);
  for (const TrialRecord& record : records) {
    write_trial_csv_row(out, record);
  }
}

std::vector<TrialRecord> read_trial_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError("line 1: empty input, expected CSV header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTrialCsvHeader) {
    throw SchemaError("line 1: bad header, expected '" +
                      std::string(kTrialCsvHeader) + "'");
  }

  std::vector<TrialRecord> records;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 11) {
      throw SchemaError("line " + std::to_string(line_number) + ": expected " +
                        "11 fields, got " + std::to_string(fields.size()));
    }
    try {
      TrialRecord record;
      record.device_label = std::string(fields[0]);
      record.op = op_kind_from_string(fields[1]);
      record.k = static_cast<unsigned>(parse_u64(fields[2]));
      record.random_accesses = parse_u64(fields[3]);
      record.r_fraction = parse_double(fields[4]);
      record.per_worker_bytes = parse_u64(fields[5]);
      record.elapsed_us = parse_double(fields[6]);
      record.throughput_bytes_per_us = parse_double(fields[7]);
      record.repetition = static_cast<unsigned>(parse_u64(fields[8]));
      record.seed = parse_u64(fields[9]);
      record.status = std::string(fields[10]);
      if (record.k < 1) {
        throw SchemaError("k must be >= 1");
      }
      if (record.ok() && !(record.elapsed_us > 0.0)) {
        throw SchemaError("ok record with non-positive elapsed_us");
      }
      records.push_back(std::move(record));
    } catch (const std::exception& e) {
      throw SchemaError("line " + std::to_string(line_number) + ": " +
                        e.what());
    }
  }
  return records;
}

std::vector<TrialRecord> load_trial_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open trial CSV: " + path.string());
  }
  return read_trial_csv(in);
}

void save_trial_csv(const std::filesystem::path& path,
                    std::span<const TrialRecord> records) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write trial CSV: " + path.string());
  }
  write_trial_csv(out, records);
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace mqssd
