#include "spectone/off_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "spectone/errors.hpp"

namespace spectone::mesh {

namespace {

// Next line that is neither blank nor a comment; false at end of stream.
bool next_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw ParseError("OFF line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

TriMesh read_off(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!next_line(in, line, line_no)) throw ParseError("OFF: empty input");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") fail(line_no, "expected header 'OFF', got '" + magic + "'");

  // Counts may share the header line.
  long nv = -1, nf = -1, ne = 0;
  if (!(header >> nv)) {
    if (!next_line(in, line, line_no)) throw ParseError("OFF: missing counts line");
    std::istringstream counts(line);
    if (!(counts >> nv >> nf)) fail(line_no, "expected counts 'V F E'");
    counts >> ne;
  } else if (!(header >> nf)) {
    fail(line_no, "expected counts 'V F E'");
  }
  if (nv < 0 || nf < 0) fail(line_no, "negative element counts");

  std::vector<Point> vertices;
  vertices.reserve(nv);
  for (long v = 0; v < nv; ++v) {
    if (!next_line(in, line, line_no)) throw ParseError("OFF: expected " + std::to_string(nv) + " vertices, got " + std::to_string(v));
    std::istringstream row(line);
    Point p;
    if (!(row >> p[0] >> p[1] >> p[2])) fail(line_no, "expected three vertex coordinates");
    vertices.push_back(p);
  }

  std::vector<Face> faces;
  faces.reserve(nf);
  for (long f = 0; f < nf; ++f) {
    if (!next_line(in, line, line_no)) throw ParseError("OFF: expected " + std::to_string(nf) + " faces, got " + std::to_string(f));
    std::istringstream row(line);
    int arity = 0;
    Face face{};
    if (!(row >> arity)) fail(line_no, "expected face arity");
    if (arity != 3) fail(line_no, "only triangles are supported, got a " + std::to_string(arity) + "-gon");
    if (!(row >> face[0] >> face[1] >> face[2])) fail(line_no, "expected three vertex indices");
    faces.push_back(face);
  }
  return TriMesh(std::move(vertices), std::move(faces));
}

TriMesh read_off_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "' for reading");
  return read_off(in);
}

void write_off(std::ostream& out, const TriMesh& mesh) {
  out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.face_count() << " 0\n";
  char buf[96];
  for (const Point& p : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p[0], p[1], p[2]);
    out << buf;
  }
  for (const Face& f : mesh.faces()) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

void write_off_file(const std::string& path, const TriMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  write_off(out, mesh);
  if (!out) throw ParseError("failed writing '" + path + "'");
}

}  // namespace spectone::mesh
