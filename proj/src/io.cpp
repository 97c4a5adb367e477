#include "rangegraph/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts are not supported");

namespace rangegraph {

namespace {

std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<char> bytes(static_cast<std::size_t>(size));
  if (size > 0) in.read(bytes.data(), size);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

class Reader {
 public:
  Reader(const std::vector<char>& bytes, std::string name)
      : bytes_(bytes), name_(std::move(name)) {}

  template <class V>
  V get() {
    V value;
    if (pos_ + sizeof(V) > bytes_.size()) throw std::runtime_error(name_ + ": truncated file");
    std::memcpy(&value, bytes_.data() + pos_, sizeof(V));
    pos_ += sizeof(V);
    return value;
  }

  template <class V>
  std::vector<V> get_array(std::size_t count) {
    const std::size_t want = count * sizeof(V);
    if (pos_ + want > bytes_.size()) throw std::runtime_error(name_ + ": truncated file");
    std::vector<V> out(count);
    std::memcpy(out.data(), bytes_.data() + pos_, want);
    pos_ += want;
    return out;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }
  void expect_end() const {
    if (pos_ != bytes_.size()) throw std::runtime_error(name_ + ": trailing bytes");
  }

 private:
  const std::vector<char>& bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

class Writer {
 public:
  template <class V>
  void put(V value) {
    const std::size_t pos = bytes_.size();
    bytes_.resize(pos + sizeof(V));
    std::memcpy(bytes_.data() + pos, &value, sizeof(V));
  }

  template <class V>
  void put_array(std::span<const V> values) {
    const std::size_t pos = bytes_.size();
    bytes_.resize(pos + values.size() * sizeof(V));
    std::memcpy(bytes_.data() + pos, values.data(), values.size() * sizeof(V));
  }

  std::vector<char>& bytes() { return bytes_; }

 private:
  std::vector<char> bytes_;
};

template <PointElem T>
PointSet read_points_typed(const std::vector<char>& bytes, const std::filesystem::path& path,
                           DistanceKind metric) {
  Reader r(bytes, path.string());
  const std::uint32_t n = r.get<std::uint32_t>();
  const std::uint32_t d = r.get<std::uint32_t>();
  if (d < 1) throw std::runtime_error(path.string() + ": dimension must be >= 1");
  const std::size_t want = std::size_t{n} * d * sizeof(T);
  if (r.remaining() != want) {
    throw std::runtime_error(path.string() + ": size mismatch, header says " +
                             std::to_string(want + 8) + " bytes but file has " +
                             std::to_string(bytes.size()));
  }
  auto data = r.get_array<T>(std::size_t{n} * d);
  return PointSet(PointMatrix<T>(n, d, std::move(data)), metric);
}

}  // namespace

ElemKind elem_kind_from_extension(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".fbin") return ElemKind::float32;
  if (ext == ".u8bin") return ElemKind::uint8;
  if (ext == ".i8bin") return ElemKind::int8;
  throw std::runtime_error("unknown point file extension: " + path.string() +
                           " (expected .fbin, .u8bin or .i8bin)");
}

PointSet read_points(const std::filesystem::path& path, DistanceKind metric) {
  const auto bytes = read_file(path);
  switch (elem_kind_from_extension(path)) {
    case ElemKind::float32: return read_points_typed<float>(bytes, path, metric);
    case ElemKind::uint8: return read_points_typed<std::uint8_t>(bytes, path, metric);
    default: return read_points_typed<std::int8_t>(bytes, path, metric);
  }
}

void write_points(const PointSet& points, const std::filesystem::path& path) {
  if (elem_kind_from_extension(path) != points.elem()) {
    throw std::runtime_error("write_points: extension of " + path.string() +
                             " does not match element kind " + to_string(points.elem()));
  }
  if (points.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::runtime_error("write_points: too many points for the format");
  }
  Writer w;
  w.put<std::uint32_t>(static_cast<std::uint32_t>(points.size()));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(points.dim()));
  visit_points(points, [&](const auto& m) { w.put_array(m.raw()); });
  write_file(path, w.bytes());
}

RangeGroundTruth read_gt(const std::filesystem::path& path, double radius) {
  const auto bytes = read_file(path);
  Reader r(bytes, path.string());
  const std::int32_t nq = r.get<std::int32_t>();
  const std::int32_t total = r.get<std::int32_t>();
  if (nq < 0 || total < 0) throw std::runtime_error(path.string() + ": negative counts");
  const auto counts = r.get_array<std::int32_t>(static_cast<std::size_t>(nq));
  std::int64_t sum = 0;
  for (std::int32_t c : counts) {
    if (c < 0) throw std::runtime_error(path.string() + ": negative per-query count");
    sum += c;
  }
  if (sum != total) {
    throw std::runtime_error(path.string() + ": counts sum to " + std::to_string(sum) +
                             " but header total is " + std::to_string(total));
  }
  const auto ids = r.get_array<std::int32_t>(static_cast<std::size_t>(total));
  const auto dists = r.get_array<float>(static_cast<std::size_t>(total));
  r.expect_end();

  RangeGroundTruth gt;
  gt.radius = radius;
  gt.results.resize(static_cast<std::size_t>(nq));
  std::size_t offset = 0;
  for (std::size_t q = 0; q < gt.results.size(); ++q) {
    auto& out = gt.results[q];
    out.reserve(static_cast<std::size_t>(counts[q]));
    for (std::int32_t k = 0; k < counts[q]; ++k, ++offset) {
      out.push_back({static_cast<std::uint32_t>(ids[offset]),
                     static_cast<double>(dists[offset])});
    }
  }
  return gt;
}

void write_gt(const RangeGroundTruth& gt, const std::filesystem::path& path) {
  Writer w;
  w.put<std::int32_t>(static_cast<std::int32_t>(gt.query_count()));
  w.put<std::int32_t>(static_cast<std::int32_t>(gt.total_results()));
  for (const auto& result : gt.results) {
    w.put<std::int32_t>(static_cast<std::int32_t>(result.size()));
  }
  for (const auto& result : gt.results) {
    for (const Neighbor& nb : result) w.put<std::int32_t>(static_cast<std::int32_t>(nb.id));
  }
  for (const auto& result : gt.results) {
    for (const Neighbor& nb : result) w.put<float>(static_cast<float>(nb.dist));
  }
  write_file(path, w.bytes());
}

ProximityGraph load_graph(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  Reader r(bytes, path.string());
  char magic[4];
  for (char& c : magic) c = r.get<char>();
  if (std::memcmp(magic, "RGG1", 4) != 0) {
    throw std::runtime_error(path.string() + ": bad magic, not a graph file");
  }
  const std::uint32_t n = r.get<std::uint32_t>();
  const std::uint32_t max_degree = r.get<std::uint32_t>();
  const std::uint32_t start_count = r.get<std::uint32_t>();
  auto start = r.get_array<std::uint32_t>(start_count);

  std::vector<std::vector<std::uint32_t>> adjacency(n);
  for (std::uint32_t u = 0; u < n; ++u) {
    const std::uint32_t degree = r.get<std::uint32_t>();
    if (degree > max_degree) {
      throw std::runtime_error(path.string() + ": node " + std::to_string(u) +
                               " has degree " + std::to_string(degree) + " > R");
    }
    adjacency[u] = r.get_array<std::uint32_t>(degree);
  }
  r.expect_end();

  ProximityGraph graph(max_degree, std::move(adjacency), std::move(start));
  graph.validate();
  return graph;
}

void save_graph(const ProximityGraph& graph, const std::filesystem::path& path) {
  Writer w;
  w.put<char>('R');
  w.put<char>('G');
  w.put<char>('G');
  w.put<char>('1');
  w.put<std::uint32_t>(static_cast<std::uint32_t>(graph.size()));
  w.put<std::uint32_t>(graph.max_degree());
  const auto starts = graph.start_points();
  w.put<std::uint32_t>(static_cast<std::uint32_t>(starts.size()));
  for (std::uint32_t s : starts) w.put<std::uint32_t>(s);
  for (std::uint32_t u = 0; u < graph.size(); ++u) {
    const auto nbrs = graph.neighbors(u);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(nbrs.size()));
    for (std::uint32_t v : nbrs) w.put<std::uint32_t>(v);
  }
  write_file(path, w.bytes());
}

}  // namespace rangegraph
