#include "gfrht/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace gfrht::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view token) {
  token = trim(token);
  double v = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::Io, "cannot parse number '" + std::string(token) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Matrix<double> parse_adjacency_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      row.push_back(parse_number(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::Io, "empty adjacency file");
  const std::size_t cols = rows.front().size();
  Matrix<double> m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorKind::NonSquare, "ragged adjacency rows");
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

Matrix<double> read_adjacency_csv(const std::filesystem::path& path) { return parse_adjacency_csv(read_text(path)); }

void write_matrix_csv(const std::filesystem::path& path, const Matrix<double>& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  write_text(path, out);
}

PgmImage parse_pgm(std::string_view text) {
  // Strip comments, then read whitespace-separated tokens.
  std::string clean;
  clean.reserve(text.size());
  bool comment = false;
  for (char c : text) {
    if (c == '#') comment = true;
    if (c == '\n') comment = false;
    if (!comment) clean += c;
  }
  std::istringstream in(clean);
  std::string magic;
  in >> magic;
  if (magic != "P2") throw Error(ErrorKind::BadImage, "expected a plain PGM (P2) header");
  long width = 0, height = 0, maxval = 0;
  if (!(in >> width >> height >> maxval) || width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
    throw Error(ErrorKind::BadImage, "malformed PGM header");
  }
  PgmImage img;
  img.maxval = static_cast<int>(maxval);
  img.pixels.resize(height, width);
  for (long r = 0; r < height; ++r) {
    for (long c = 0; c < width; ++c) {
      long v = 0;
      if (!(in >> v) || v < 0 || v > maxval) throw Error(ErrorKind::BadImage, "truncated or out-of-range PGM data");
      img.pixels(r, c) = static_cast<double>(v);
    }
  }
  return img;
}

PgmImage read_pgm(const std::filesystem::path& path) { return parse_pgm(read_text(path)); }

std::string format_pgm(const Matrix<double>& unit_image) {
  std::string out = "P2\n" + std::to_string(unit_image.cols()) + " " + std::to_string(unit_image.rows()) + "\n255\n";
  for (Eigen::Index r = 0; r < unit_image.rows(); ++r) {
    for (Eigen::Index c = 0; c < unit_image.cols(); ++c) {
      const double v = std::clamp(unit_image(r, c), 0.0, 1.0);
      if (c) out += ' ';
      out += std::to_string(static_cast<int>(std::lround(v * 255.0)));
    }
    out += '\n';
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, const Matrix<double>& unit_image) {
  write_text(path, format_pgm(unit_image));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace gfrht::io
