#include "lovhinge/dataset_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace lovhinge {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

std::vector<Bag> read_dataset_jsonl(std::istream& in) {
  std::vector<Bag> bags;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DataFormatError(line_no, "invalid JSON");
    if (!j.contains("features") || !j.contains("labels"))
      throw DataFormatError(line_no, "missing \"features\" or \"labels\"");
    const auto& jf = j["features"];
    const auto& jl = j["labels"];
    if (!jf.is_array() || jf.empty() || !jl.is_array())
      throw DataFormatError(line_no, "features must be a nonempty array of rows");
    const int p = static_cast<int>(jf.size());
    if (static_cast<int>(jl.size()) != p)
      throw DataFormatError(line_no, "labels length does not match features");
    if (!jf[0].is_array() || jf[0].empty())
      throw DataFormatError(line_no, "feature rows must be nonempty arrays");
    const int d = static_cast<int>(jf[0].size());
    Bag bag;
    bag.features = Matrix(p, d);
    bag.labels.resize(p);
    for (int r = 0; r < p; ++r) {
      if (!jf[r].is_array() || static_cast<int>(jf[r].size()) != d)
        throw DataFormatError(line_no, "ragged feature rows");
      for (int c = 0; c < d; ++c) {
        if (!jf[r][c].is_number())
          throw DataFormatError(line_no, "non-numeric feature entry");
        bag.features.at(r, c) = jf[r][c].get<double>();
      }
      if (!jl[r].is_number_integer())
        throw DataFormatError(line_no, "labels must be integers");
      const int y = jl[r].get<int>();
      if (y != 1 && y != -1) throw DataFormatError(line_no, "labels must be +1 or -1");
      bag.labels[r] = y;
    }
    if (!bags.empty() && (bags.front().features.rows != p || bags.front().features.cols != d))
      throw DataFormatError(line_no, "bag dimensions differ from the first line");
    bags.push_back(std::move(bag));
  }
  return bags;
}

std::vector<Bag> load_dataset_jsonl(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_dataset_jsonl(in);
}

void write_dataset_jsonl(std::ostream& out, std::span<const Bag> data) {
  for (const Bag& bag : data) {
    nlohmann::json jf = nlohmann::json::array();
    for (int r = 0; r < bag.features.rows; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < bag.features.cols; ++c) row.push_back(bag.features.at(r, c));
      jf.push_back(std::move(row));
    }
    nlohmann::json j;
    j["features"] = std::move(jf);
    j["labels"] = bag.labels;
    out << j.dump() << '\n';
  }
}

void save_dataset_jsonl(const std::string& path, std::span<const Bag> data) {
  std::ofstream out = open_output(path);
  write_dataset_jsonl(out, data);
}

void write_model(std::ostream& out, const LinearModel& model) {
  out << model.weights.rows << ' ' << model.weights.cols << '\n';
  out << std::setprecision(17);
  for (int r = 0; r < model.weights.rows; ++r) {
    for (int c = 0; c < model.weights.cols; ++c) {
      if (c) out << ' ';
      out << model.weights.at(r, c);
    }
    out << '\n';
  }
}

void save_model(const std::string& path, const LinearModel& model) {
  std::ofstream out = open_output(path);
  write_model(out, model);
}

LinearModel read_model(std::istream& in) {
  int p = 0, d = 0;
  if (!(in >> p >> d) || p < 1 || d < 1)
    throw std::runtime_error("model file: bad header");
  LinearModel model;
  model.weights = Matrix(p, d);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < d; ++c)
      if (!(in >> model.weights.at(r, c)))
        throw std::runtime_error("model file: truncated weights");
  return model;
}

LinearModel load_model(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_model(in);
}

}  // namespace lovhinge
