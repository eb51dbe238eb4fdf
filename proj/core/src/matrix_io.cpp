#include "rrie/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "rrie/csv.hpp"
#include "rrie/error.hpp"

namespace rrie {
namespace {

void put_u64_le(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffU);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64_le(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw IoError("matrix file truncated");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

}  // namespace

Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    for (const auto& field : split_csv_line(line)) row.push_back(parse_double(field));
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError("ragged CSV matrix: row " + std::to_string(rows.size() + 1));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty CSV matrix");
  Matrix a(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) a(i, j) = rows[i][j];
  return a;
}

void write_matrix_csv(std::ostream& out, const Matrix& a) {
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) out << ',';
      out << format_double(a(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix_binary(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMatrixMagic, sizeof magic) != 0)
    throw IoError("bad matrix magic (expected RRIEMAT1)");
  const auto rows = get_u64_le(in);
  const auto cols = get_u64_le(in);
  constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 32;
  if (rows == 0 || cols == 0 || rows > kMaxEntries / cols)
    throw IoError("implausible matrix dimensions in header");
  Matrix a(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) a(i, j) = std::bit_cast<double>(get_u64_le(in));
  return a;
}

void write_matrix_binary(std::ostream& out, const Matrix& a) {
  out.write(kMatrixMagic, sizeof kMatrixMagic);
  put_u64_le(out, static_cast<std::uint64_t>(a.rows()));
  put_u64_le(out, static_cast<std::uint64_t>(a.cols()));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) put_u64_le(out, std::bit_cast<std::uint64_t>(a(i, j)));
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char head[8] = {};
  in.read(head, sizeof head);
  const bool binary = in.gcount() == 8 && std::memcmp(head, kMatrixMagic, 8) == 0;
  in.clear();
  in.seekg(0);
  return binary ? read_matrix_binary(in) : read_matrix_csv(in);
}

MatrixFormat format_for_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".csv" ? MatrixFormat::Csv : MatrixFormat::Binary;
}

void write_matrix(const std::filesystem::path& path, const Matrix& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  if (format_for_path(path) == MatrixFormat::Csv)
    write_matrix_csv(out, a);
  else
    write_matrix_binary(out, a);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace rrie
