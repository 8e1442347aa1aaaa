#include "acslab/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "acslab/errors.hpp"

namespace acslab {
namespace {

constexpr char kMagic[8] = {'A', 'C', 'S', 'F', 'L', 'D', '0', '1'};

static_assert(std::endian::native == std::endian::little, "field files assume a little-endian host");

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T take(std::ifstream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw Error(ErrorKind::IoError, "truncated header in " + path);
  return v;
}

}  // namespace

std::string field_header_json(const FormField& field) {
  nlohmann::ordered_json j;
  j["format"] = "acslab-field-1";
  j["degree"] = field.degree;
  j["resolution"] = field.chart.resolution;
  j["periods"] = field.chart.periods;
  j["components"] = field.components.size();
  j["component_order"] = "lexicographic i<j";
  j["axis_order"] = "x1 outermost";
  j["dtype"] = "float64-le";
  return j.dump(2);
}

void write_field(const std::string& path, const FormField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  out.write(kMagic, sizeof(kMagic));
  put<std::int32_t>(out, field.degree);
  put<std::int32_t>(out, field.chart.resolution);
  for (double p : field.chart.periods) put<double>(out, p);
  put<std::int32_t>(out, static_cast<std::int32_t>(field.components.size()));
  for (const auto& c : field.components) {
    out.write(reinterpret_cast<const char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(double)));
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
  std::ofstream side(path + ".json");
  side << field_header_json(field) << '\n';
  if (!side) throw Error(ErrorKind::IoError, "write failed for " + path + ".json");
}

FormField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorKind::IoError, path + " is not a field file");
  }
  const int degree = take<std::int32_t>(in, path);
  GridChart chart;
  chart.resolution = take<std::int32_t>(in, path);
  for (double& p : chart.periods) p = take<double>(in, path);
  const int ncomp = take<std::int32_t>(in, path);
  if (degree < 0 || degree > 4 || ncomp != forms::dimension(degree)) {
    throw Error(ErrorKind::IoError, "inconsistent header in " + path);
  }
  try {
    chart.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::IoError, std::string("bad chart in ") + path + ": " + e.what());
  }
  FormField f = FormField::zero(chart, degree);
  for (auto& c : f.components) {
    if (!in.read(reinterpret_cast<char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(double)))) {
      throw Error(ErrorKind::IoError, "truncated data in " + path);
    }
  }
  return f;
}

}  // namespace acslab
