#include "qovae/nn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace qovae::nn {

namespace {

std::string join_shape(const std::vector<int>& shape) {
  std::string out;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(shape[i]);
  }
  return out;
}

std::vector<int> split_shape(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, 'x')) out.push_back(std::stoi(part));
  return out;
}

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  else return __builtin_bswap64(v);
}

}  // namespace

std::filesystem::path manifest_path(const std::filesystem::path& prefix) { return prefix.string() + ".manifest"; }
std::filesystem::path params_path(const std::filesystem::path& prefix) { return prefix.string() + ".params"; }

void write_checkpoint(const std::filesystem::path& prefix, const ParamStore& store,
                      const std::map<std::string, std::string>& meta) {
  {
    std::ofstream out(manifest_path(prefix));
    if (!out) throw CheckpointError("cannot write " + manifest_path(prefix).string());
    out << "qovae-checkpoint 1\n";
    for (const auto& [k, v] : meta) {
      if (k.find_first_of(" \n") != std::string::npos || v.find('\n') != std::string::npos) {
        throw CheckpointError("meta key/value must be single-line and keys space-free: " + k);
      }
      out << "meta " << k << ' ' << v << '\n';
    }
    for (const ParamInfo& p : store.info()) {
      out << "param " << p.name << ' ' << join_shape(p.shape) << ' ' << p.offset << ' ' << p.size << '\n';
    }
    out << "total " << store.size() << '\n';
  }
  std::ofstream bin(params_path(prefix), std::ios::binary);
  if (!bin) throw CheckpointError("cannot write " + params_path(prefix).string());
  for (double v : store.values()) {
    const std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(v));
    bin.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
  if (!bin) throw CheckpointError("write failed for " + params_path(prefix).string());
}

Checkpoint read_checkpoint(const std::filesystem::path& prefix) {
  std::ifstream in(manifest_path(prefix));
  if (!in) throw CheckpointError("cannot open " + manifest_path(prefix).string());
  Checkpoint ck;
  std::string line;
  if (!std::getline(in, line) || line != "qovae-checkpoint 1") throw CheckpointError("not a qovae checkpoint manifest");
  std::size_t total = 0;
  bool have_total = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "meta") {
      std::string key;
      ls >> key;
      std::string value;
      std::getline(ls >> std::ws, value);
      ck.meta[key] = value;
    } else if (kind == "param") {
      ParamInfo p;
      std::string shape;
      ls >> p.name >> shape >> p.offset >> p.size;
      if (!ls) throw CheckpointError("malformed param line: " + line);
      p.shape = split_shape(shape);
      ck.params.push_back(std::move(p));
    } else if (kind == "total") {
      ls >> total;
      have_total = true;
    } else {
      throw CheckpointError("unknown manifest line: " + line);
    }
  }
  if (!have_total) throw CheckpointError("manifest lacks total");

  std::ifstream bin(params_path(prefix), std::ios::binary);
  if (!bin) throw CheckpointError("cannot open " + params_path(prefix).string());
  ck.values.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::uint64_t bits = 0;
    if (!bin.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw CheckpointError("params file truncated");
    ck.values[i] = std::bit_cast<double>(to_le(bits));
  }
  if (bin.peek() != std::char_traits<char>::eof()) throw CheckpointError("params file longer than manifest total");
  return ck;
}

void load_into(const Checkpoint& ckpt, ParamStore& store) {
  const auto& want = store.info();
  if (want.size() != ckpt.params.size()) throw CheckpointError("checkpoint parameter count mismatch");
  for (std::size_t i = 0; i < want.size(); ++i) {
    const ParamInfo& a = want[i];
    const ParamInfo& b = ckpt.params[i];
    if (a.name != b.name || a.shape != b.shape || a.offset != b.offset || a.size != b.size) {
      throw CheckpointError("checkpoint layout mismatch at " + b.name);
    }
  }
  if (ckpt.values.size() != store.size()) throw CheckpointError("checkpoint value count mismatch");
  std::copy(ckpt.values.begin(), ckpt.values.end(), store.values().begin());
}

}  // namespace qovae::nn
