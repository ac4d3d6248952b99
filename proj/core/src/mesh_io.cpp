#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "potlab/errors.hpp"
#include "potlab/mesh.hpp"

namespace potlab {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Next non-empty line with '#' comments stripped, or false at end of file.
bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line_no,
                             const std::string& what) {
  std::ostringstream msg;
  msg << path.string() << ":" << line_no << ": " << what;
  throw InputError(msg.str());
}

TriMesh read_off(std::istream& in, const std::filesystem::path& path) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_content_line(in, line, line_no)) parse_fail(path, line_no, "empty file");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") parse_fail(path, line_no, "missing OFF header");
  long nv = -1, nf = -1, ne = 0;
  if (!(header >> nv)) {
    if (!next_content_line(in, line, line_no)) parse_fail(path, line_no, "missing counts");
    std::istringstream counts(line);
    counts >> nv >> nf >> ne;
  } else {
    header >> nf >> ne;
  }
  if (nv <= 0 || nf <= 0) parse_fail(path, line_no, "invalid vertex/face counts");

  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    if (!next_content_line(in, line, line_no)) parse_fail(path, line_no, "unexpected end of file");
    std::istringstream ls(line);
    Vec3 v;
    if (!(ls >> v.x() >> v.y() >> v.z())) parse_fail(path, line_no, "malformed vertex");
    vertices.push_back(v);
  }
  std::vector<Face> faces;
  faces.reserve(static_cast<std::size_t>(nf));
  for (long i = 0; i < nf; ++i) {
    if (!next_content_line(in, line, line_no)) parse_fail(path, line_no, "unexpected end of file");
    std::istringstream ls(line);
    int count = 0;
    if (!(ls >> count)) parse_fail(path, line_no, "malformed face");
    if (count != 3) {
      parse_fail(path, line_no, "non-triangular face " + std::to_string(i) + " with " +
                                    std::to_string(count) + " vertices");
    }
    Face f{};
    if (!(ls >> f[0] >> f[1] >> f[2])) parse_fail(path, line_no, "malformed face");
    faces.push_back(f);
  }
  return TriMesh(std::move(vertices), std::move(faces));
}

TriMesh read_obj(std::istream& in, const std::filesystem::path& path) {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  std::string line;
  std::size_t line_no = 0;
  while (next_content_line(in, line, line_no)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x() >> v.y() >> v.z())) parse_fail(path, line_no, "malformed vertex");
      vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<std::int32_t> idx;
      std::string token;
      while (ls >> token) {
        // "i", "i/t", "i//n" or "i/t/n"; negative indices are relative.
        const long raw = std::stol(token.substr(0, token.find('/')));
        const long resolved = raw < 0 ? static_cast<long>(vertices.size()) + raw : raw - 1;
        idx.push_back(static_cast<std::int32_t>(resolved));
      }
      if (idx.size() != 3) {
        parse_fail(path, line_no, "non-triangular face " + std::to_string(faces.size()) +
                                      " with " + std::to_string(idx.size()) + " vertices");
      }
      faces.push_back({idx[0], idx[1], idx[2]});
    }
  }
  if (vertices.empty() || faces.empty()) parse_fail(path, line_no, "no vertices or faces");
  return TriMesh(std::move(vertices), std::move(faces));
}

}  // namespace

TriMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open mesh file '" + path.string() + "'");
  const auto ext = lower(path.extension().string());
  try {
    if (ext == ".off") return read_off(in, path);
    if (ext == ".obj") return read_obj(in, path);
  } catch (const std::invalid_argument&) {
    throw InputError(path.string() + ": malformed number");
  } catch (const std::out_of_range&) {
    throw InputError(path.string() + ": number out of range");
  }
  throw InputError("unsupported mesh format '" + ext + "' (expected .off or .obj)");
}

void save_off(const std::filesystem::path& path, std::span<const Vec3> vertices,
              std::span<const Face> faces) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << "OFF\n" << vertices.size() << ' ' << faces.size() << " 0\n";
  out << std::setprecision(17);
  for (const auto& v : vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

void save_off(const std::filesystem::path& path, const TriMesh& mesh) {
  save_off(path, mesh.vertices(), mesh.faces());
}

}  // namespace potlab
