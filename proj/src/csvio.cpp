#include "phaseest/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace phaseest {

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

void write_meta_block(std::ofstream& out, const MetadataBlock& meta) {
  for (const auto& [k, v] : meta) out << "# " << k << " = " << v << "\n";
}

void close_or_throw(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  // shortest representation that round-trips a double
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

void write_curve_csv(const std::string& path, const MetadataBlock& meta,
                     const VarianceCurve& curve) {
  auto out = open_or_throw(path);
  write_meta_block(out, meta);
  out << "n,sigma2,stderr,trials,diffuse_count\n";
  for (const auto& s : curve.samples) {
    out << s.n << ',' << format_double(s.sigma2) << ',' << format_double(s.stderr_sigma2) << ','
        << s.trials << ',' << s.diffuse_count << '\n';
  }
  close_or_throw(out, path);
}

void write_scan_csv(const std::string& path, const MetadataBlock& meta,
                    const std::vector<double>& thetas, const std::vector<double>& expectations,
                    const std::vector<double>& stderrs) {
  if (thetas.size() != expectations.size() || thetas.size() != stderrs.size())
    throw std::invalid_argument("write_scan_csv: column length mismatch");
  auto out = open_or_throw(path);
  write_meta_block(out, meta);
  out << "theta,expectation,stderr\n";
  for (size_t i = 0; i < thetas.size(); ++i) {
    out << format_double(thetas[i]) << ',' << format_double(expectations[i]) << ','
        << format_double(stderrs[i]) << '\n';
  }
  close_or_throw(out, path);
}

void write_posterior_csv(const std::string& path, const MetadataBlock& meta,
                         const PosteriorGrid1D& grid) {
  auto out = open_or_throw(path);
  write_meta_block(out, meta);
  out << "phi_bin,density\n";
  for (int i = 0; i < grid.bins(); ++i)
    out << format_double(grid.center(i)) << ',' << format_double(grid.density_at(i)) << '\n';
  close_or_throw(out, path);
}

void write_metadata_file(const std::string& path, const MetadataBlock& meta) {
  auto out = open_or_throw(path);
  for (const auto& [k, v] : meta) out << k << " = " << v << "\n";
  close_or_throw(out, path);
}

}  // namespace phaseest
