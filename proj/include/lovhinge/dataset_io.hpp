#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "lovhinge/model.hpp"

namespace lovhinge {

// Malformed dataset input; `line` is 1-based.
struct DataFormatError : std::runtime_error {
  DataFormatError(int line_number, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + message),
        line(line_number) {}
  int line;
};

// One bag per line: {"features": [[f11..f1d], ..], "labels": [+-1 x p]}.
std::vector<Bag> read_dataset_jsonl(std::istream& in);
std::vector<Bag> load_dataset_jsonl(const std::string& path);
void write_dataset_jsonl(std::ostream& out, std::span<const Bag> data);
void save_dataset_jsonl(const std::string& path, std::span<const Bag> data);

// Flat text model format: first line "p d", then p rows of d weights at 17
// significant digits (round-trip exact).
void write_model(std::ostream& out, const LinearModel& model);
void save_model(const std::string& path, const LinearModel& model);
LinearModel read_model(std::istream& in);
LinearModel load_model(const std::string& path);

}  // namespace lovhinge
