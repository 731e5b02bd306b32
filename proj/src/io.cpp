#include "qcav/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qcav {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), end);
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string observables_csv(std::span<const ObservableRecord> records) {
  std::string out = "sweep,E_red,M,field_term\n";
  for (const auto& r : records) {
    out += std::to_string(r.sweep);
    out += ',';
    out += format_double(r.E_red);
    out += ',';
    out += std::to_string(r.M);
    out += ',';
    out += format_double(r.field_term);
    out += '\n';
  }
  return out;
}

namespace {

std::string opt(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("nan");
}

}  // namespace

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    const auto& s = r.summary;
    out += std::to_string(r.L) + ',' + format_double(r.K) + ',' + format_double(r.T_red) + ',' +
           format_double(r.b) + ',' + std::to_string(r.seed) + ',' + format_double(s.E.value) +
           ',' + opt(s.E.error) + ',' + format_double(s.abs_M.value) + ',' + opt(s.abs_M.error) +
           ',' + opt(s.binder_U) + ',' + format_double(s.ln_enhancement.value) + ',' +
           opt(s.ln_enhancement.error) + '\n';
  }
  return out;
}

}  // namespace qcav
