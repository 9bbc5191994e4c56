#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gfrht/types.hpp"

namespace gfrht::io {

/// Shortest round-trip representation, '.' decimal, locale independent.
std::string format_double(double v);

/// Comma-separated rows, one matrix row per line. Exponent notation accepted.
Matrix<double> parse_adjacency_csv(std::string_view text);
Matrix<double> read_adjacency_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix<double>& m);

/// Plain PGM (P2). Values are returned as raw gray levels together with maxval.
struct PgmImage {
  Matrix<double> pixels;
  int maxval = 255;
};

PgmImage parse_pgm(std::string_view text);
PgmImage read_pgm(const std::filesystem::path& path);

/// Writes values in [0, 1] as P2 with maxval 255.
std::string format_pgm(const Matrix<double>& unit_image);
void write_pgm(const std::filesystem::path& path, const Matrix<double>& unit_image);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace gfrht::io
