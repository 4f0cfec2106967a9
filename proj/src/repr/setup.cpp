#include "qovae/repr/setup.hpp"

#include <algorithm>
#include <charconv>
#include <optional>

namespace qovae::repr {

using optics::DeviceKind;
using optics::DeviceOp;
using optics::Path;

ParseError::ParseError(std::size_t position, const std::string& reason, std::size_t line)
    : std::runtime_error((line ? "line " + std::to_string(line) + ", " : std::string()) + "position " +
                         std::to_string(position) + ": " + reason),
      position_(position),
      line_(line),
      reason_(reason) {}

int Setup::two_photon_count() const {
  return static_cast<int>(std::count_if(devices.begin(), devices.end(), [](const DeviceOp& d) { return d.is_two_photon(); }));
}

std::string render(const Setup& setup) {
  std::string out;
  for (std::size_t i = 0; i < setup.devices.size(); ++i) {
    if (i) out += ' ';
    out += setup.devices[i].token();
  }
  return out;
}

namespace {

std::vector<std::string_view> split_args(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = s.find(',', start);
    out.push_back(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

DeviceOp parse_token(std::string_view tok, std::size_t pos, const Vocabulary& vocab) {
  const std::size_t open = tok.find('(');
  if (open == std::string_view::npos || tok.back() != ')') throw ParseError(pos, "expected NAME(args)");
  const std::string_view name = tok.substr(0, open);
  const std::vector<std::string_view> args = split_args(tok.substr(open + 1, tok.size() - open - 2));

  auto path_arg = [&](std::size_t i) {
    const std::string_view a = args[i];
    std::optional<Path> p = a.size() == 1 ? optics::path_from_letter(a[0]) : std::nullopt;
    if (!p || !vocab.allows_path(*p)) throw ParseError(pos, "bad path '" + std::string(a) + "'");
    return *p;
  };
  auto expect_args = [&](std::size_t n) {
    if (args.size() != n) {
      throw ParseError(pos, std::string(name) + " takes " + std::to_string(n) + " argument(s)");
    }
  };

  if (name == "BS" || name == "DownConv") {
    expect_args(2);
    const Path p = path_arg(0), q = path_arg(1);
    if (p == q) throw ParseError(pos, "repeated path in two-path device");
    return name == "BS" ? DeviceOp::beam_splitter(p, q) : DeviceOp::down_conv(p, q);
  }
  if (name == "Ref" || name == "DP") {
    expect_args(1);
    const Path p = path_arg(0);
    return name == "Ref" ? DeviceOp::mirror(p) : DeviceOp::dove_prism(p);
  }
  if (name == "OAMHolo") {
    expect_args(2);
    const Path p = path_arg(0);
    const std::string_view a = args[1];
    int n = 0;
    std::size_t skip = (!a.empty() && a[0] == '+') ? 1 : 0;
    auto [end, ec] = std::from_chars(a.data() + skip, a.data() + a.size(), n);
    if (ec != std::errc{} || end != a.data() + a.size() || a.size() == skip) {
      throw ParseError(pos, "bad hologram shift '" + std::string(a) + "'");
    }
    if (n == 0) throw ParseError(pos, "hologram shift must be nonzero");
    if (!vocab.allows_shift(n)) throw ParseError(pos, "hologram shift " + std::to_string(n) + " outside vocabulary");
    return DeviceOp::hologram(p, n);
  }
  throw ParseError(pos, "unknown device '" + std::string(name) + "'");
}

}  // namespace

Setup parse(std::string_view text, const Vocabulary& vocab) {
  Setup out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    std::size_t space = text.find(' ', pos);
    std::string_view tok = text.substr(pos, space == std::string_view::npos ? std::string_view::npos : space - pos);
    if (tok.empty()) throw ParseError(pos, "empty token");
    out.devices.push_back(parse_token(tok, pos, vocab));
    if (space == std::string_view::npos) break;
    pos = space + 1;
  }
  return out;
}

}  // namespace qovae::repr
