#include "gamot/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");
static_assert(sizeof(double) == 8, "checkpoint format assumes 64-bit doubles");

namespace gamot {

namespace {

constexpr const char* kMagic = "gamot-checkpoint";
constexpr int kVersion = 1;

[[noreturn]] void parse_error(const std::string& path, const std::string& what) {
  throw std::runtime_error("checkpoint " + path + ": " + what);
}

}  // namespace

void save_checkpoint(const std::string& path, const std::vector<const Parameter*>& params) {
  std::set<std::string> seen;
  std::ostringstream header;
  header << kMagic << " " << kVersion << "\n";
  std::size_t offset = 0;
  for (const Parameter* p : params) {
    if (!p) throw std::invalid_argument("save_checkpoint: null parameter");
    if (!seen.insert(p->name).second)
      throw std::invalid_argument("save_checkpoint: duplicate name " + p->name);
    header << "tensor " << p->name << " " << p->value.rank();
    for (int d : p->value.shape()) header << " " << d;
    header << " " << offset << "\n";
    offset += p->value.size() * sizeof(double);
  }
  header << "data " << offset << "\n";

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  const std::string h = header.str();
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  for (const Parameter* p : params) {
    auto span = p->value.data();
    out.write(reinterpret_cast<const char*>(span.data()),
              static_cast<std::streamsize>(span.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

std::map<std::string, Tensor> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) parse_error(path, "empty file");
  {
    std::istringstream ls(line);
    std::string magic;
    int version = 0;
    if (!(ls >> magic >> version) || magic != kMagic) parse_error(path, "bad magic line");
    if (version != kVersion) parse_error(path, "unsupported version " + std::to_string(version));
  }

  struct Entry {
    std::string name;
    std::vector<int> dims;
    std::size_t offset;
  };
  std::vector<Entry> entries;
  std::size_t total_bytes = 0;
  for (;;) {
    if (!std::getline(in, line)) parse_error(path, "truncated header");
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "data") {
      if (!(ls >> total_bytes)) parse_error(path, "bad data line");
      break;
    }
    if (tag != "tensor") parse_error(path, "unexpected header line: " + line);
    Entry e;
    int rank = 0;
    if (!(ls >> e.name >> rank) || rank < 1 || rank > 2) parse_error(path, "bad tensor line: " + line);
    e.dims.resize(rank);
    for (int i = 0; i < rank; ++i)
      if (!(ls >> e.dims[i]) || e.dims[i] <= 0) parse_error(path, "bad dims: " + line);
    if (!(ls >> e.offset)) parse_error(path, "missing offset: " + line);
    entries.push_back(std::move(e));
  }

  std::vector<char> blob(total_bytes);
  in.read(blob.data(), static_cast<std::streamsize>(total_bytes));
  if (static_cast<std::size_t>(in.gcount()) != total_bytes) parse_error(path, "truncated data section");

  std::map<std::string, Tensor> result;
  for (const Entry& e : entries) {
    std::size_t count = 1;
    for (int d : e.dims) count *= static_cast<std::size_t>(d);
    std::size_t bytes = count * sizeof(double);
    if (e.offset + bytes > total_bytes) parse_error(path, "offset out of range for " + e.name);
    std::vector<double> data(count);
    std::memcpy(data.data(), blob.data() + e.offset, bytes);
    Tensor t = e.dims.size() == 1 ? Tensor::vector(std::move(data))
                                  : Tensor::matrix(e.dims[0], e.dims[1], std::move(data));
    if (!result.emplace(e.name, std::move(t)).second)
      parse_error(path, "duplicate tensor " + e.name);
  }
  return result;
}

void load_checkpoint_into(const std::string& path, const std::vector<Parameter*>& params) {
  auto tensors = load_checkpoint(path);
  for (Parameter* p : params) {
    auto it = tensors.find(p->name);
    if (it == tensors.end())
      throw std::runtime_error("checkpoint " + path + ": missing tensor " + p->name);
    if (it->second.rows() != p->value.rows() || it->second.cols() != p->value.cols())
      throw std::runtime_error("checkpoint " + path + ": shape mismatch for " + p->name + " (" +
                               it->second.shape_str() + " vs " + p->value.shape_str() + ")");
    p->value = it->second;
    p->grad = Tensor::zeros(p->value.rows(), p->value.cols());
    tensors.erase(it);
  }
  if (!tensors.empty())
    throw std::runtime_error("checkpoint " + path + ": unknown tensor " + tensors.begin()->first);
}

}  // namespace gamot
