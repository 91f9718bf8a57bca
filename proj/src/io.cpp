#include "pw/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "pw/errors.hpp"

namespace pw::io {

namespace {

using nlohmann::json;

std::string values_path_for(const std::string& json_path,
                            ValueEncoding encoding) {
  std::filesystem::path p(json_path);
  p.replace_extension(encoding == ValueEncoding::BinaryLE ? ".bin"
                                                          : ".values.csv");
  return p.string();
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_values(const std::string& path, const std::vector<Complex>& values,
                  ValueEncoding encoding) {
  if (encoding == ValueEncoding::BinaryLE) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::IoError, "cannot write " + path);
    for (const Complex& v : values) {
      double re = v.real(), im = v.imag();
      os.write(reinterpret_cast<const char*>(&re), sizeof(double));
      os.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
    return;
  }
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path);
  os << "re,im\n";
  for (const Complex& v : values)
    os << fmt_double(v.real()) << ',' << fmt_double(v.imag()) << '\n';
}

std::vector<Complex> read_values(const std::string& path,
                                 ValueEncoding encoding, std::size_t count) {
  std::vector<Complex> values;
  values.reserve(count);
  if (encoding == ValueEncoding::BinaryLE) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::IoError, "cannot read " + path);
    for (std::size_t i = 0; i < count; ++i) {
      double re = 0.0, im = 0.0;
      is.read(reinterpret_cast<char*>(&re), sizeof(double));
      is.read(reinterpret_cast<char*>(&im), sizeof(double));
      if (!is)
        throw Error(ErrorCode::ParseError, "truncated value file " + path);
      values.emplace_back(re, im);
    }
    return values;
  }
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double re = 0.0, im = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf", &re, &im) != 2)
      throw Error(ErrorCode::ParseError, "bad CSV row in " + path);
    values.emplace_back(re, im);
  }
  if (values.size() != count)
    throw Error(ErrorCode::ParseError, "value count mismatch in " + path);
  return values;
}

json support_to_json(const BandSupport& s) {
  json box = json::array();
  for (const auto& iv : s.box()) box.push_back({iv.lo, iv.hi});
  return json{{"box", box}, {"ball_radius", s.ball_radius()}};
}

json axes_to_json(const std::vector<AxisGrid>& axes) {
  json out = json::array();
  for (const auto& ax : axes)
    out.push_back({{"lo", ax.lo}, {"hi", ax.hi}, {"nodes", ax.nodes}});
  return out;
}

std::vector<AxisGrid> axes_from_json(const json& j) {
  std::vector<AxisGrid> axes;
  for (const auto& a : j)
    axes.push_back(AxisGrid{a.at("lo").get<double>(),
                            a.at("hi").get<double>(),
                            a.at("nodes").get<int>()});
  return axes;
}

}  // namespace

void save_signal(const PWSignal& sig, const std::string& json_path,
                 ValueEncoding encoding,
                 const std::map<std::string, std::string>& meta) {
  const SpectralDensity& spec = sig.spectrum();
  json header;
  header["format"] = "pw-signal";
  header["format_version"] = 1;
  header["dim"] = sig.dim();
  header["support"] = support_to_json(spec.support());
  header["grid"] = {{"axes", axes_to_json(spec.axes())},
                    {"storage", spec.is_separable() ? "separable" : "dense"}};
  std::vector<Complex> values;
  if (spec.is_separable()) {
    for (const auto& f : spec.factors())
      values.insert(values.end(), f.begin(), f.end());
  } else {
    values = spec.dense_values();
  }
  if (sig.is_catalog()) {
    const char* kinds = "KPQ";
    json cat;
    cat["kind"] = std::string(1, kinds[static_cast<int>(sig.catalog_kind())]);
    cat["axis"] = sig.catalog_axis();
    json shift = json::array();
    for (int i = 0; i < sig.catalog_shift().size(); ++i)
      shift.push_back(sig.catalog_shift()[i]);
    cat["shift"] = shift;
    header["rep"] = "catalog";
    header["catalog"] = cat;
  } else {
    header["rep"] = "spectral";
  }
  std::string vpath = values_path_for(json_path, encoding);
  header["values"] = {
      {"file", std::filesystem::path(vpath).filename().string()},
      {"encoding",
       encoding == ValueEncoding::BinaryLE ? "f64le-pairs" : "csv"},
      {"count", values.size()}};
  if (!meta.empty()) {
    json m;
    for (const auto& [k, v] : meta) m[k] = v;
    header["meta"] = m;
  }
  write_text_file(json_path, header.dump(2) + "\n");
  write_values(vpath, values, encoding);
}

PWSignal load_signal(const std::string& json_path) {
  json header;
  try {
    header = json::parse(read_text_file(json_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError,
                "load_signal: bad JSON in " + json_path + ": " + e.what());
  }
  try {
    if (header.at("format").get<std::string>() != "pw-signal")
      throw Error(ErrorCode::ParseError, "load_signal: not a pw-signal file");
    const int dim = header.at("dim").get<int>();
    auto axes = axes_from_json(header.at("grid").at("axes"));
    std::string storage = header.at("grid").at("storage").get<std::string>();

    json jsup = header.at("support");
    std::vector<Interval> box;
    for (const auto& iv : jsup.at("box"))
      box.push_back(Interval{iv.at(0).get<double>(), iv.at(1).get<double>()});
    BandSupport support = BandSupport::from_box_with_radius(
        box, jsup.at("ball_radius").get<double>());

    json jv = header.at("values");
    ValueEncoding enc = jv.at("encoding").get<std::string>() == "csv"
                            ? ValueEncoding::Csv
                            : ValueEncoding::BinaryLE;
    std::size_t count = jv.at("count").get<std::size_t>();
    std::string vpath =
        (std::filesystem::path(json_path).parent_path() /
         jv.at("file").get<std::string>())
            .string();
    std::vector<Complex> values = read_values(vpath, enc, count);

    SpectralDensity spec = [&]() {
      if (storage == "separable") {
        std::vector<std::vector<Complex>> factors;
        std::size_t off = 0;
        for (const auto& ax : axes) {
          if (off + static_cast<std::size_t>(ax.nodes) > values.size())
            throw Error(ErrorCode::ParseError,
                        "load_signal: separable factor length mismatch");
          factors.emplace_back(values.begin() + off,
                               values.begin() + off + ax.nodes);
          off += static_cast<std::size_t>(ax.nodes);
        }
        return SpectralDensity::separable(support, axes, std::move(factors));
      }
      return SpectralDensity(support, axes, std::move(values));
    }();

    if (header.at("rep").get<std::string>() == "catalog") {
      json cat = header.at("catalog");
      std::string kind_s = cat.at("kind").get<std::string>();
      CatalogKind kind = kind_s == "K"   ? CatalogKind::K
                         : kind_s == "P" ? CatalogKind::P
                                         : CatalogKind::Q;
      Vector shift(dim);
      const auto& js = cat.at("shift");
      for (int i = 0; i < dim; ++i) shift[i] = js.at(i).get<double>();
      // Rebuild from parameters; construction is deterministic, so the
      // rebuilt spectrum matches the stored one.
      double h = spec.min_spacing();
      int cpu = h > 0.0 ? static_cast<int>(std::llround(1.0 / h))
                        : kDefaultCellsPerUnit;
      return PWSignal::catalog(dim, kind, cat.at("axis").get<int>(),
                               std::move(shift), cpu);
    }
    return PWSignal::spectral(std::move(spec));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError,
                "load_signal: missing field in " + json_path + ": " +
                    e.what());
  }
}

std::string affine_to_json(const affine::AffineMap& phi) {
  json j;
  j["rows"] = phi.dim_out();
  j["cols"] = phi.dim_in();
  json mat = json::array();
  for (int r = 0; r < phi.A.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < phi.A.cols(); ++c) row.push_back(phi.A(r, c));
    mat.push_back(row);
  }
  j["matrix"] = mat;
  json off = json::array();
  for (int r = 0; r < phi.b.size(); ++r) off.push_back(phi.b[r]);
  j["offset"] = off;
  return j.dump(2) + "\n";
}

affine::AffineMap affine_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    int rows = j.at("rows").get<int>();
    int cols = j.at("cols").get<int>();
    Matrix A(rows, cols);
    const auto& mat = j.at("matrix");
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) A(r, c) = mat.at(r).at(c).get<double>();
    Vector b(rows);
    const auto& off = j.at("offset");
    for (int r = 0; r < rows; ++r) b[r] = off.at(r).get<double>();
    return affine::AffineMap{std::move(A), std::move(b)};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError,
                std::string("affine_from_json: ") + e.what());
  }
}

std::string decomposition_to_json(const affine::InjectiveDecomposition& dec) {
  auto mat_json = [](const Matrix& M) {
    json out = json::array();
    for (int r = 0; r < M.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
      out.push_back(row);
    }
    return out;
  };
  json j;
  j["kmap"] = mat_json(dec.Kmap);
  j["q"] = mat_json(dec.Q);
  j["n"] = dec.Kmap.rows();
  j["m"] = dec.Q.rows();
  return j.dump(2) + "\n";
}

void write_spectrum_csv(const spectra::DiscreteSpectrum& spec,
                        const std::string& path,
                        const std::map<std::string, std::string>& meta) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path);
  for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
  for (int a = 1; a <= spec.dim(); ++a) os << 'u' << a << ',';
  os << "power\n";
  const auto& p = spec.power();
  std::vector<std::size_t> sizes(spec.dim());
  for (int a = 0; a < spec.dim(); ++a) sizes[a] = spec.freq_axes()[a].size();
  for (std::size_t flat = 0; flat < p.size(); ++flat) {
    std::size_t rem = flat;
    std::vector<double> u(spec.dim());
    for (int a = spec.dim() - 1; a >= 0; --a) {
      u[a] = spec.freq_axes()[a][rem % sizes[a]];
      rem /= sizes[a];
    }
    for (int a = 0; a < spec.dim(); ++a) os << fmt_double(u[a]) << ',';
    os << fmt_double(p[flat]) << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path);
  os << content;
  if (!os) throw Error(ErrorCode::IoError, "write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(is),
                     std::istreambuf_iterator<char>());
}

}  // namespace pw::io
