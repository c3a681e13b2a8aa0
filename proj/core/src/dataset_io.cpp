#include "eigensafe/dataset_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "eigensafe/error.hpp"
#include "eigensafe/format.hpp"

namespace eigensafe {

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double parse_double(const std::string& token) {
  if (token.empty()) throw ValidationError("empty numeric field");
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size())
    throw ValidationError("bad numeric field '" + token + "'");
  return v;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  data.validate();
  const std::size_t sd = data.state_dim();
  const std::size_t ad = data.action_dim();
  for (std::size_t d = 0; d < sd; ++d) out << 's' << d << ',';
  for (std::size_t d = 0; d < ad; ++d) out << 'a' << d << ',';
  out << "terminal";
  for (std::size_t d = 0; d < sd; ++d) out << ",ns" << d;
  out << '\n';
  for (const auto& t : data.tuples) {
    for (std::size_t d = 0; d < sd; ++d)
      out << format_g17(t.state.coords[d]) << ',';
    for (std::size_t d = 0; d < ad; ++d)
      out << format_g17(t.action.coords[d]) << ',';
    out << (t.next_state.terminal ? '1' : '0');
    for (std::size_t d = 0; d < sd; ++d)
      out << ',' << format_g17(t.next_state.terminal ? 0.0
                                                     : t.next_state.coords[d]);
    out << '\n';
  }
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_dataset_csv(out, data);
  if (!out) throw IoError("failed writing " + path.string());
}

Dataset read_dataset_csv(std::istream& in, std::string env_id,
                         std::uint64_t seed) {
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError("dataset file is empty");
  const auto header = split_csv_line(line);
  std::size_t sd = 0, ad = 0;
  std::size_t i = 0;
  while (i < header.size() && header[i] == "s" + std::to_string(sd)) ++i, ++sd;
  while (i < header.size() && header[i] == "a" + std::to_string(ad)) ++i, ++ad;
  if (sd == 0 || ad == 0 || i >= header.size() || header[i] != "terminal")
    throw ValidationError("bad dataset header '" + line + "'");
  ++i;
  for (std::size_t d = 0; d < sd; ++d, ++i)
    if (i >= header.size() || header[i] != "ns" + std::to_string(d))
      throw ValidationError("bad dataset header '" + line + "'");
  if (i != header.size())
    throw ValidationError("trailing columns in dataset header");

  Dataset data;
  data.env_id = std::move(env_id);
  data.seed = seed;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 2 * sd + ad + 1)
      throw ValidationError("dataset line " + std::to_string(line_no) +
                            ": expected " + std::to_string(2 * sd + ad + 1) +
                            " fields, got " + std::to_string(f.size()));
    TransitionTuple t;
    t.state.coords.resize(sd);
    t.action.coords.resize(ad);
    std::size_t k = 0;
    for (std::size_t d = 0; d < sd; ++d) t.state.coords[d] = parse_double(f[k++]);
    for (std::size_t d = 0; d < ad; ++d) t.action.coords[d] = parse_double(f[k++]);
    const std::string& term = f[k++];
    if (term != "0" && term != "1")
      throw ValidationError("dataset line " + std::to_string(line_no) +
                            ": terminal flag must be 0 or 1");
    if (term == "1") {
      t.next_state = StateVector::unsafe(sd);
      for (std::size_t d = 0; d < sd; ++d)
        if (parse_double(f[k++]) != 0.0)
          throw ValidationError("dataset line " + std::to_string(line_no) +
                                ": terminal row has nonzero next state");
    } else {
      t.next_state.coords.resize(sd);
      for (std::size_t d = 0; d < sd; ++d)
        t.next_state.coords[d] = parse_double(f[k++]);
    }
    data.tuples.push_back(std::move(t));
  }
  data.validate();
  return data;
}

Dataset read_dataset_csv(const std::filesystem::path& path, std::string env_id,
                         std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_dataset_csv(in, std::move(env_id), seed);
}

}  // namespace eigensafe
