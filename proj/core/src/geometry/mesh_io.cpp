#include "orbitcarve/geometry/mesh_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/log.hpp"

namespace orbitcarve {
namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::vector<char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------- OBJ

// Parses the vertex index of an OBJ face token ("7", "7/1", "7//3", "-1").
std::optional<long long> obj_index(std::string_view token, long long vertex_count) {
  const auto slash = token.find('/');
  const std::string head(token.substr(0, slash));
  if (head.empty()) return std::nullopt;
  char* end = nullptr;
  const long long v = std::strtoll(head.c_str(), &end, 10);
  if (*end != '\0' || v == 0) return std::nullopt;
  return v > 0 ? v - 1 : vertex_count + v;
}

TriMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  const std::string name = path.string();

  TriMesh mesh;
  std::vector<long long> face_lines;
  std::map<std::string, int> ignored;
  int colored = -1;  // -1 unknown, 0 no, 1 yes
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      std::vector<double> values;
      std::string tok;
      while (ss >> tok) {
        char* end = nullptr;
        const double d = std::strtod(tok.c_str(), &end);
        if (*end != '\0') throw ParseError(name, fmt::format("bad number '{}'", tok), line_no, false);
        values.push_back(d);
      }
      if (values.size() != 3 && values.size() != 6) {
        throw ParseError(name, fmt::format("vertex needs 3 or 6 numbers, got {}", values.size()),
                         line_no, false);
      }
      const int has_rgb = values.size() == 6 ? 1 : 0;
      if (colored == -1) colored = has_rgb;
      if (colored != has_rgb) {
        throw ParseError(name, "vertex colors must be given for all vertices or none", line_no,
                         false);
      }
      const Vec3 p(values[0], values[1], values[2]);
      if (!p.allFinite()) throw ParseError(name, "non-finite vertex coordinate", line_no, false);
      mesh.vertices.push_back(p);
      if (has_rgb) {
        const Vec3 c(values[3], values[4], values[5]);
        if (!c.allFinite() || c.minCoeff() < 0.0 || c.maxCoeff() > 1.0) {
          throw ParseError(name, "vertex color outside [0, 1]", line_no, false);
        }
        mesh.colors.push_back(c);
      }
    } else if (tag == "f") {
      std::vector<std::string> tokens;
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (tokens.size() != 3) {
        throw ParseError(name,
                         fmt::format("face has {} vertices; only triangles are supported",
                                     tokens.size()),
                         line_no, false);
      }
      Face f{};
      for (int k = 0; k < 3; ++k) {
        // Relative indices resolve against the vertices read so far.
        const auto idx = obj_index(tokens[k], static_cast<long long>(mesh.vertices.size()));
        if (!idx) throw ParseError(name, fmt::format("bad face index '{}'", tokens[k]), line_no, false);
        if (*idx < 0 || *idx > std::numeric_limits<int>::max()) {
          throw IndexError(fmt::format("vertex index {} out of range (line {})", *idx + 1, line_no),
                           static_cast<long long>(mesh.faces.size()));
        }
        f[k] = static_cast<int>(*idx);
      }
      mesh.faces.push_back(f);
      face_lines.push_back(line_no);
    } else {
      ++ignored[tag];
    }
  }
  for (const auto& [tag, count] : ignored) {
    log::warn(fmt::format("{}: ignored {} '{}' directive(s)", name, count, tag));
  }
  const auto nv = static_cast<long long>(mesh.vertices.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    for (int v : mesh.faces[f]) {
      if (v >= nv) {
        throw IndexError(fmt::format("references vertex {} but the file has {} vertices (line {})",
                                     v + 1, nv, face_lines[f]),
                         static_cast<long long>(f));
      }
    }
  }
  mesh.validate();
  return mesh;
}

void save_obj(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& p = mesh.vertices[i];
    if (mesh.has_colors()) {
      const Vec3& c = mesh.colors[i];
      out << fmt::format("v {:.17g} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g}\n", p.x(), p.y(), p.z(),
                         c.x(), c.y(), c.z());
    } else {
      out << fmt::format("v {:.17g} {:.17g} {:.17g}\n", p.x(), p.y(), p.z());
    }
  }
  for (const Face& f : mesh.faces) {
    out << fmt::format("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1);
  }
  if (!out) throw IoError(fmt::format("write failed for {}", path.string()));
}

// ---------------------------------------------------------------- PLY

enum class PlyType { int8, uint8, int16, uint16, int32, uint32, float32, float64 };

std::optional<PlyType> ply_type(const std::string& s) {
  static const std::map<std::string, PlyType> kTypes = {
      {"char", PlyType::int8},     {"int8", PlyType::int8},      {"uchar", PlyType::uint8},
      {"uint8", PlyType::uint8},   {"short", PlyType::int16},    {"int16", PlyType::int16},
      {"ushort", PlyType::uint16}, {"uint16", PlyType::uint16},  {"int", PlyType::int32},
      {"int32", PlyType::int32},   {"uint", PlyType::uint32},    {"uint32", PlyType::uint32},
      {"float", PlyType::float32}, {"float32", PlyType::float32}, {"double", PlyType::float64},
      {"float64", PlyType::float64}};
  const auto it = kTypes.find(s);
  if (it == kTypes.end()) return std::nullopt;
  return it->second;
}

std::size_t ply_size(PlyType t) {
  switch (t) {
    case PlyType::int8:
    case PlyType::uint8: return 1;
    case PlyType::int16:
    case PlyType::uint16: return 2;
    case PlyType::int32:
    case PlyType::uint32:
    case PlyType::float32: return 4;
    case PlyType::float64: return 8;
  }
  return 0;
}

template <typename T>
T load_le(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    auto* b = reinterpret_cast<unsigned char*>(&v);
    std::reverse(b, b + sizeof(T));
  }
  return v;
}

double ply_value(PlyType t, const char* p) {
  switch (t) {
    case PlyType::int8: return static_cast<double>(load_le<std::int8_t>(p));
    case PlyType::uint8: return static_cast<double>(load_le<std::uint8_t>(p));
    case PlyType::int16: return static_cast<double>(load_le<std::int16_t>(p));
    case PlyType::uint16: return static_cast<double>(load_le<std::uint16_t>(p));
    case PlyType::int32: return static_cast<double>(load_le<std::int32_t>(p));
    case PlyType::uint32: return static_cast<double>(load_le<std::uint32_t>(p));
    case PlyType::float32: return static_cast<double>(load_le<float>(p));
    case PlyType::float64: return load_le<double>(p);
  }
  return 0.0;
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::float32;
  bool is_list = false;
  PlyType count_type = PlyType::uint8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

struct PlyData {
  std::vector<Vec3> positions;
  std::vector<Vec3> colors;
  std::vector<Vec3> normals;
  std::vector<Face> faces;
  bool has_colors = false;
  bool has_normals = false;
};

PlyData read_ply(const std::filesystem::path& path) {
  const std::string name = path.string();
  const std::vector<char> bytes = read_bytes(path);

  // Header.
  std::vector<PlyElement> elements;
  std::size_t pos = 0;
  long long line_no = 0;
  bool saw_format = false;
  auto next_line = [&]() -> std::optional<std::string> {
    if (pos >= bytes.size()) return std::nullopt;
    const auto* begin = bytes.data() + pos;
    const auto* nl = static_cast<const char*>(std::memchr(begin, '\n', bytes.size() - pos));
    if (!nl) return std::nullopt;
    std::string l(begin, nl);
    pos = static_cast<std::size_t>(nl - bytes.data()) + 1;
    ++line_no;
    if (!l.empty() && l.back() == '\r') l.pop_back();
    return l;
  };
  auto first = next_line();
  if (!first || *first != "ply") throw ParseError(name, "missing 'ply' magic", 0, true);
  while (true) {
    const std::size_t line_start = pos;
    auto l = next_line();
    if (!l) throw ParseError(name, "header has no end_header", static_cast<long long>(line_start), true);
    std::istringstream ss(*l);
    std::string kw;
    ss >> kw;
    if (kw == "end_header") break;
    if (kw == "comment" || kw == "obj_info" || kw.empty()) continue;
    if (kw == "format") {
      std::string fmt_name, version;
      ss >> fmt_name >> version;
      if (fmt_name == "ascii") {
        throw ParseError(name, "ASCII PLY is not supported (binary_little_endian only)",
                         static_cast<long long>(line_start), true);
      }
      if (fmt_name != "binary_little_endian") {
        throw ParseError(name, fmt::format("unsupported PLY format '{}'", fmt_name),
                         static_cast<long long>(line_start), true);
      }
      saw_format = true;
    } else if (kw == "element") {
      PlyElement e;
      long long count = -1;
      ss >> e.name >> count;
      if (e.name.empty() || count < 0) {
        throw ParseError(name, "malformed element line", static_cast<long long>(line_start), true);
      }
      e.count = static_cast<std::size_t>(count);
      elements.push_back(e);
    } else if (kw == "property") {
      if (elements.empty()) {
        throw ParseError(name, "property before any element", static_cast<long long>(line_start), true);
      }
      PlyProperty p;
      std::string t;
      ss >> t;
      if (t == "list") {
        std::string ct, it;
        ss >> ct >> it >> p.name;
        const auto c = ply_type(ct);
        const auto i = ply_type(it);
        if (!c || !i) throw ParseError(name, "unknown list type", static_cast<long long>(line_start), true);
        p.is_list = true;
        p.count_type = *c;
        p.type = *i;
      } else {
        const auto ty = ply_type(t);
        ss >> p.name;
        if (!ty) {
          throw ParseError(name, fmt::format("unknown property type '{}'", t),
                           static_cast<long long>(line_start), true);
        }
        p.type = *ty;
      }
      elements.back().properties.push_back(p);
    } else {
      throw ParseError(name, fmt::format("unexpected header keyword '{}'", kw),
                       static_cast<long long>(line_start), true);
    }
  }
  if (!saw_format) throw ParseError(name, "missing format line", 0, true);

  PlyData out;
  auto need = [&](std::size_t n) {
    if (pos + n > bytes.size()) {
      throw ParseError(name, "unexpected end of data", static_cast<long long>(pos), true);
    }
  };
  for (const PlyElement& e : elements) {
    const bool is_vertex = e.name == "vertex";
    const bool is_face = e.name == "face";
    auto index_of = [&](std::initializer_list<const char*> names) -> int {
      for (std::size_t i = 0; i < e.properties.size(); ++i) {
        for (const char* n : names) {
          if (e.properties[i].name == n) return static_cast<int>(i);
        }
      }
      return -1;
    };
    int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1, inx = -1, iny = -1, inz = -1, ilist = -1;
    if (is_vertex) {
      ix = index_of({"x"});
      iy = index_of({"y"});
      iz = index_of({"z"});
      ir = index_of({"red", "r"});
      ig = index_of({"green", "g"});
      ib = index_of({"blue", "b"});
      inx = index_of({"nx"});
      iny = index_of({"ny"});
      inz = index_of({"nz"});
      if (ix < 0 || iy < 0 || iz < 0) {
        throw ParseError(name, "vertex element lacks x/y/z", static_cast<long long>(pos), true);
      }
      out.has_colors = ir >= 0 && ig >= 0 && ib >= 0;
      out.has_normals = inx >= 0 && iny >= 0 && inz >= 0;
      out.positions.reserve(e.count);
    }
    if (is_face) {
      ilist = index_of({"vertex_indices", "vertex_index"});
      if (ilist < 0 || !e.properties[ilist].is_list) {
        throw ParseError(name, "face element lacks a vertex_indices list", static_cast<long long>(pos),
                         true);
      }
      out.faces.reserve(e.count);
    }
    std::vector<double> scalars(e.properties.size(), 0.0);
    for (std::size_t row = 0; row < e.count; ++row) {
      const std::size_t row_start = pos;
      for (std::size_t pi = 0; pi < e.properties.size(); ++pi) {
        const PlyProperty& p = e.properties[pi];
        if (!p.is_list) {
          const std::size_t sz = ply_size(p.type);
          need(sz);
          scalars[pi] = ply_value(p.type, bytes.data() + pos);
          pos += sz;
          continue;
        }
        const std::size_t csz = ply_size(p.count_type);
        need(csz);
        const double count_d = ply_value(p.count_type, bytes.data() + pos);
        pos += csz;
        if (count_d < 0) throw ParseError(name, "negative list length", static_cast<long long>(row_start), true);
        const auto count = static_cast<std::size_t>(count_d);
        const std::size_t isz = ply_size(p.type);
        need(count * isz);
        if (is_face && static_cast<int>(pi) == ilist) {
          if (count != 3) {
            throw ParseError(name,
                             fmt::format("face {} has {} vertices; only triangles are supported", row,
                                         count),
                             static_cast<long long>(row_start), true);
          }
          Face f{};
          for (std::size_t k = 0; k < 3; ++k) {
            const double v = ply_value(p.type, bytes.data() + pos + k * isz);
            if (v < 0 || v > std::numeric_limits<int>::max()) {
              throw IndexError(fmt::format("vertex index {} out of range", v), static_cast<long long>(row));
            }
            f[k] = static_cast<int>(v);
          }
          out.faces.push_back(f);
        }
        pos += count * isz;
      }
      if (is_vertex) {
        out.positions.emplace_back(scalars[ix], scalars[iy], scalars[iz]);
        if (out.has_colors) {
          const bool bytes_color = e.properties[ir].type == PlyType::uint8;
          const double s = bytes_color ? 1.0 / 255.0 : 1.0;
          out.colors.emplace_back(scalars[ir] * s, scalars[ig] * s, scalars[ib] * s);
        }
        if (out.has_normals) out.normals.emplace_back(scalars[inx], scalars[iny], scalars[inz]);
      }
    }
  }
  return out;
}

template <typename T>
void put_le(std::string& buf, T v) {
  char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  buf.append(b, sizeof(T));
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError(fmt::format("write failed for {}", path.string()));
}

std::uint8_t quantize_color(double c) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0));
}

void save_ply(const TriMesh& mesh, const std::filesystem::path& path) {
  std::string buf;
  buf += "ply\nformat binary_little_endian 1.0\n";
  buf += fmt::format("element vertex {}\n", mesh.vertices.size());
  buf += "property float x\nproperty float y\nproperty float z\n";
  if (mesh.has_colors()) buf += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  buf += fmt::format("element face {}\n", mesh.faces.size());
  buf += "property list uchar int vertex_indices\nend_header\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    for (int k = 0; k < 3; ++k) put_le(buf, static_cast<float>(mesh.vertices[i][k]));
    if (mesh.has_colors()) {
      for (int k = 0; k < 3; ++k) put_le(buf, quantize_color(mesh.colors[i][k]));
    }
  }
  for (const Face& f : mesh.faces) {
    put_le(buf, static_cast<std::uint8_t>(3));
    for (int v : f) put_le(buf, static_cast<std::int32_t>(v));
  }
  write_file(path, buf);
}

}  // namespace

TriMesh load_mesh(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".obj") return load_obj(path);
  if (ext != ".ply") throw IoError(fmt::format("{}: unsupported mesh extension", path.string()));
  PlyData d = read_ply(path);
  TriMesh mesh;
  mesh.vertices = std::move(d.positions);
  mesh.faces = std::move(d.faces);
  if (d.has_colors) mesh.colors = std::move(d.colors);
  const auto nv = static_cast<long long>(mesh.vertices.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    for (int v : mesh.faces[f]) {
      if (v >= nv) {
        throw IndexError(fmt::format("references vertex {} but the file has {} vertices", v, nv),
                         static_cast<long long>(f));
      }
    }
  }
  mesh.validate();
  return mesh;
}

void save_mesh(const TriMesh& mesh, const std::filesystem::path& path) {
  mesh.validate();
  const std::string ext = lower_extension(path);
  if (ext == ".obj") {
    save_obj(mesh, path);
  } else if (ext == ".ply") {
    save_ply(mesh, path);
  } else {
    throw IoError(fmt::format("{}: unsupported mesh extension", path.string()));
  }
}

void OrientedPointCloud::validate() const {
  if (points.size() != normals.size()) {
    throw InvariantError(fmt::format("point cloud has {} points but {} normals", points.size(),
                                     normals.size()));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].allFinite()) throw InvariantError(fmt::format("point {} is not finite", i));
    if (std::abs(normals[i].norm() - 1.0) > 1e-4) {
      throw InvariantError(fmt::format("normal {} is not unit length", i));
    }
  }
}

OrientedPointCloud load_point_cloud(const std::filesystem::path& path) {
  if (lower_extension(path) != ".ply") {
    throw IoError(fmt::format("{}: point clouds must be .ply", path.string()));
  }
  PlyData d = read_ply(path);
  if (!d.has_normals) {
    throw ParseError(path.string(), "point cloud lacks nx/ny/nz properties", 0, true);
  }
  OrientedPointCloud cloud;
  cloud.points = std::move(d.positions);
  cloud.normals = std::move(d.normals);
  for (Vec3& n : cloud.normals) {
    const double len = n.norm();
    if (len > 0.0) n /= len;
  }
  cloud.validate();
  return cloud;
}

void save_point_cloud(const OrientedPointCloud& cloud, const std::filesystem::path& path) {
  cloud.validate();
  std::string buf;
  buf += "ply\nformat binary_little_endian 1.0\n";
  buf += fmt::format("element vertex {}\n", cloud.size());
  buf += "property float x\nproperty float y\nproperty float z\n";
  buf += "property float nx\nproperty float ny\nproperty float nz\nend_header\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (int k = 0; k < 3; ++k) put_le(buf, static_cast<float>(cloud.points[i][k]));
    for (int k = 0; k < 3; ++k) put_le(buf, static_cast<float>(cloud.normals[i][k]));
  }
  write_file(path, buf);
}

}  // namespace orbitcarve
