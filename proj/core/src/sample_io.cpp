#include "superrad/sample_io.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "superrad/csv.hpp"

namespace superrad {

void write_sample(std::ostream& out, const SampleGeometry& sample) {
  const Vec3 k0 = sample.k0_vector();
  out << "# superrad-sample 1\n";
  out << "# k0 " << format_double(k0.x()) << ' ' << format_double(k0.y()) << ' '
      << format_double(k0.z()) << '\n';
  out << "# gamma1 " << format_double(sample.gamma1()) << '\n';
  for (const auto& r : sample.positions()) {
    out << format_double(r.x()) << ' ' << format_double(r.y()) << ' '
        << format_double(r.z()) << '\n';
  }
}

void write_sample(const std::filesystem::path& path, const SampleGeometry& sample) {
  std::ostringstream text;
  write_sample(text, sample);
  write_text_file(path, text.str());
}

SampleGeometry read_sample(std::istream& in, CoincidencePolicy coincidence) {
  std::optional<Vec3> k0;
  std::optional<double> gamma1;
  std::vector<Vec3> positions;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first[0] == '#') {
      std::string key = first.size() > 1 ? first.substr(1) : std::string();
      if (key.empty()) fields >> key;
      if (key == "k0") {
        Vec3 k;
        if (!(fields >> k.x() >> k.y() >> k.z())) {
          throw std::invalid_argument("sample line " + std::to_string(line_no) +
                                      ": malformed k0 header");
        }
        k0 = k;
      } else if (key == "gamma1") {
        double g;
        if (!(fields >> g)) {
          throw std::invalid_argument("sample line " + std::to_string(line_no) +
                                      ": malformed gamma1 header");
        }
        gamma1 = g;
      }
      continue;
    }
    std::istringstream row(line);
    Vec3 r;
    std::string extra;
    if (!(row >> r.x() >> r.y() >> r.z()) || (row >> extra)) {
      throw std::invalid_argument("sample line " + std::to_string(line_no) +
                                  ": expected three coordinates");
    }
    positions.push_back(r);
  }

  if (!k0) throw std::invalid_argument("sample table has no k0 header");
  if (!gamma1) throw std::invalid_argument("sample table has no gamma1 header");
  const double k = k0->norm();
  if (!(k > 0.0)) throw std::invalid_argument("sample table k0 is zero");
  return SampleGeometry(std::move(positions), k, *k0 / k, *gamma1, coincidence);
}

SampleGeometry read_sample(const std::filesystem::path& path,
                           CoincidencePolicy coincidence) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open sample table");
  return read_sample(in, coincidence);
}

}  // namespace superrad
