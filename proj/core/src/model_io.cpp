#include "eigensafe/nn/model_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "eigensafe/error.hpp"
#include "eigensafe/format.hpp"

namespace eigensafe::nn {

void save_mlp(const std::filesystem::path& path, const Mlp& net,
              std::span<const Interval> squash) {
  if (!squash.empty() && squash.size() != net.output_dim())
    throw ContractError("squash bounds do not match network output dimension");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "dims";
  for (std::size_t d : net.dims()) out << ' ' << d;
  out << "\nact relu\n";
  if (!squash.empty()) {
    out << "squash";
    for (const Interval& b : squash)
      out << ' ' << format_g17(b.lo) << ' ' << format_g17(b.hi);
    out << '\n';
  }
  for (double p : net.params()) out << format_g17(p) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

LoadedMlp load_mlp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line, word;

  if (!std::getline(in, line)) throw ValidationError("empty model file");
  std::istringstream dims_line(line);
  dims_line >> word;
  if (word != "dims") throw ValidationError("model file must start with 'dims'");
  std::vector<std::size_t> dims;
  std::size_t d;
  while (dims_line >> d) dims.push_back(d);
  if (dims.size() < 2) throw ValidationError("model file has too few dims");

  if (!std::getline(in, line) || line != "act relu")
    throw ValidationError("model file missing 'act relu' tag");

  LoadedMlp loaded;
  loaded.net = Mlp(dims);

  std::streampos after_header = in.tellg();
  if (std::getline(in, line)) {
    std::istringstream squash_line(line);
    squash_line >> word;
    if (word == "squash") {
      double lo, hi;
      while (squash_line >> lo >> hi) loaded.squash.push_back({lo, hi});
      if (loaded.squash.size() != dims.back())
        throw ValidationError("squash bounds do not match output dimension");
    } else {
      in.seekg(after_header);
    }
  }

  auto params = loaded.net.params();
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!std::getline(in, line))
      throw ValidationError("model file truncated at parameter " +
                            std::to_string(i));
    params[i] = parse_double(line);
  }
  return loaded;
}

void save_scalar(const std::filesystem::path& path, double value) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << format_g17(value) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

double load_scalar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty scalar file");
  return parse_double(line);
}

}  // namespace eigensafe::nn
