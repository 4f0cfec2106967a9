#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qovae/optics/device.hpp"
#include "qovae/repr/vocabulary.hpp"

namespace qovae::repr {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& reason, std::size_t line = 0);

  [[nodiscard]] std::size_t position() const { return position_; }
  /// 1-based line for dataset files, 0 otherwise.
  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] const std::string& reason() const { return reason_; }

 private:
  std::size_t position_;
  std::size_t line_;
  std::string reason_;
};

/// Ordered device sequence; the first device acts first.
struct Setup {
  std::vector<optics::DeviceOp> devices;

  [[nodiscard]] std::size_t length() const { return devices.size(); }
  [[nodiscard]] int two_photon_count() const;
  friend bool operator==(const Setup&, const Setup&) = default;
};

/// Space-separated canonical tokens.
std::string render(const Setup& setup);

/// Inverse of render. Accepts either path order for two-path devices.
Setup parse(std::string_view text, const Vocabulary& vocab);

}  // namespace qovae::repr
