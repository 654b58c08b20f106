#pragma once

/*
 * Field dump format, shared verbatim by the CLI and the oracle tooling:
 * a text header, then raw little-endian 8-byte doubles, row-major with
 * real/imaginary interleaved.  Sample order: component, then side (plus
 * before minus), then flat tangential index, then normal index.
 */

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "twophase/field.hh"

namespace twophase {

inline constexpr const char* dump_magic = "twophase-field";

namespace detail {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_side(std::ostream& os, const std::vector<cplx>& v) {
  for (const cplx& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw error("dump: non-finite sample");
    const double re = z.real(), im = z.imag();
    os.write(reinterpret_cast<const char*>(&re), 8);
    os.write(reinterpret_cast<const char*>(&im), 8);
  }
}

inline void read_side(std::istream& is, std::vector<cplx>& v) {
  for (cplx& z : v) {
    double re = 0, im = 0;
    is.read(reinterpret_cast<char*>(&re), 8);
    is.read(reinterpret_cast<char*>(&im), 8);
    if (!is) throw error("dump: truncated payload");
    if (!std::isfinite(re) || !std::isfinite(im)) throw error("dump: non-finite sample");
    z = cplx(re, im);
  }
}

inline void write_header(std::ostream& os, const two_phase_grid& g, int components) {
  os << dump_magic << " 1\n"
     << "dim " << g.dim << "\n"
     << "tangential_size " << g.tangential_size << "\n"
     << "tangential_period " << format_real(g.tangential_period) << "\n"
     << "normal_half_extent " << format_real(g.normal_half_extent) << "\n"
     << "normal_points " << g.normal_points << "\n"
     << "phase both\n"
     << "components " << components << "\n"
     << "data\n";
}

inline int read_header(std::istream& is, two_phase_grid& g) {
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != dump_magic || version != 1) throw error("dump: bad magic");
  int components = -1;
  std::string key;
  while (is >> key) {
    if (key == "data") break;
    if (key == "dim") is >> g.dim;
    else if (key == "tangential_size") is >> g.tangential_size;
    else if (key == "tangential_period") is >> g.tangential_period;
    else if (key == "normal_half_extent") is >> g.normal_half_extent;
    else if (key == "normal_points") is >> g.normal_points;
    else if (key == "components") is >> components;
    else if (key == "phase") {
      std::string tag;
      is >> tag;
      if (tag != "both") throw error("dump: unsupported phase tag");
    } else {
      throw error("dump: unknown header key '" + key + "'");
    }
    if (!is) throw error("dump: malformed header");
  }
  if (key != "data") throw error("dump: missing data marker");
  is.get();  // newline after the marker
  if (components < 1) throw error("dump: bad component count");
  g.validate();
  return components;
}

}  // namespace detail

inline void write_dump(std::ostream& os, const two_phase_scalar_field& f) {
  detail::write_header(os, f.grid, 1);
  detail::write_side(os, f.plus_values);
  detail::write_side(os, f.minus_values);
}

inline void write_dump(std::ostream& os, const two_phase_vector_field& f) {
  detail::write_header(os, f.grid, f.grid.dim);
  for (const auto& c : f.comp) {
    detail::write_side(os, c.plus_values);
    detail::write_side(os, c.minus_values);
  }
}

inline void write_dump_file(const std::string& path, const two_phase_scalar_field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw error("dump: cannot open '" + path + "' for writing");
  write_dump(os, f);
}

inline void write_dump_file(const std::string& path, const two_phase_vector_field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw error("dump: cannot open '" + path + "' for writing");
  write_dump(os, f);
}

/* Reads either a scalar (components = 1) or a vector (components = dim)
 * dump; returns the vector form with scalar promoted to one component. */
struct dump_contents {
  int components = 0;
  two_phase_grid grid;
  std::vector<two_phase_scalar_field> fields;
};

inline dump_contents read_dump(std::istream& is) {
  dump_contents d;
  d.components = detail::read_header(is, d.grid);
  for (int c = 0; c < d.components; ++c) {
    two_phase_scalar_field f(d.grid);
    detail::read_side(is, f.plus_values);
    detail::read_side(is, f.minus_values);
    d.fields.push_back(std::move(f));
  }
  char probe;
  if (is.read(&probe, 1) && is.gcount() == 1) throw error("dump: trailing bytes");
  return d;
}

inline dump_contents read_dump_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw error("dump: cannot open '" + path + "'");
  return read_dump(is);
}

inline two_phase_scalar_field read_scalar_dump(const std::string& path) {
  auto d = read_dump_file(path);
  if (d.components != 1) throw error("dump: expected a scalar field");
  return d.fields[0];
}

inline two_phase_vector_field read_vector_dump(const std::string& path) {
  auto d = read_dump_file(path);
  if (d.components != d.grid.dim) throw error("dump: expected a vector field");
  two_phase_vector_field v(d.grid);
  v.comp = std::move(d.fields);
  return v;
}

}  // namespace twophase
