#include "plcomp/csv.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace plcomp {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::string trajectory_csv(std::span<const StepRecord> records, std::string_view config_hash,
                           std::span<const double> batch_losses) {
  std::ostringstream out;
  out << "# schema=" << kTrajectorySchema << " config_hash=" << config_hash << "\n";
  out << "step,loss,A,B,grad_norm,recovery_error,pl_ratio";
  const bool with_batch = !batch_losses.empty();
  if (with_batch) out << ",batch_loss";
  const std::size_t bins = records.empty() ? 0 : records.front().bin_loss.size();
  for (std::size_t b = 0; b < bins; ++b) out << ",bin" << (b + 1) << "_loss";
  out << "\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out << r.step << ',' << format_double(r.loss) << ',' << format_double(r.A) << ','
        << format_double(r.B) << ',' << format_double(r.grad_norm) << ','
        << format_double(r.recovery_error) << ',' << format_double(r.pl_ratio);
    if (with_batch) out << ',' << format_double(batch_losses[i]);
    for (double l : r.bin_loss) out << ',' << format_double(l);
    out << "\n";
  }
  return out.str();
}

std::string KeyValueReport::str() const {
  std::string s;
  for (const auto& [k, v] : items_) s += k + "=" + v + "\n";
  return s;
}

std::string slice_grid_csv(const LandscapeSlice& slice) {
  std::ostringstream out;
  out << "# rows follow dir1 from -" << format_double(slice.extent1) << " to +"
      << format_double(slice.extent1) << "; columns follow dir2 from -"
      << format_double(slice.extent2) << " to +" << format_double(slice.extent2) << "\n";
  for (std::size_t i = 0; i < slice.resolution; ++i) {
    for (std::size_t j = 0; j < slice.resolution; ++j) {
      if (j) out << ',';
      out << format_double(slice.at(i, j));
    }
    out << "\n";
  }
  return out.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

}  // namespace plcomp
