#include "mmsev/forest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>

#include "mmsev/util.hpp"

namespace mmsev::forest {

int ForestParams::resolved_mtry(std::size_t cols) const {
  if (mtry > 0) return mtry;
  return static_cast<int>((cols + 2) / 3);  // ceil(cols / 3)
}

void ForestParams::validate(std::size_t cols) const {
  if (n_trees < 1) fail(Errc::invalid_config, "n_trees must be >= 1");
  if (min_samples_leaf < 1)
    fail(Errc::invalid_config, "min_samples_leaf must be >= 1");
  const int m = resolved_mtry(cols);
  if (m < 1 || m > static_cast<int>(cols))
    fail(Errc::invalid_config, "mtry must be in [1, cols]");
}

double RegressionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(
        x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[i].value;
}

namespace {

struct TreeBuilder {
  const Matrix& x;
  std::span<const double> y;
  int max_depth;
  int min_leaf;
  int mtry;
  SplitMix64& rng;
  std::vector<TreeNode> nodes;
  std::vector<std::size_t> feature_pool;  // partial Fisher-Yates scratch
  std::vector<std::pair<double, double>> sorted;  // (feature value, target)

  TreeBuilder(const Matrix& x_, std::span<const double> y_, int max_depth_,
              int min_leaf_, int mtry_, SplitMix64& rng_)
      : x(x_), y(y_), max_depth(max_depth_), min_leaf(min_leaf_), mtry(mtry_),
        rng(rng_) {
    feature_pool.resize(x.cols);
  }

  std::vector<std::size_t> draw_features() {
    std::iota(feature_pool.begin(), feature_pool.end(), 0);
    const std::size_t m = static_cast<std::size_t>(mtry);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(rng.next_below(feature_pool.size() - i));
      std::swap(feature_pool[i], feature_pool[j]);
    }
    std::vector<std::size_t> out(feature_pool.begin(),
                                 feature_pool.begin() + static_cast<long>(m));
    // Ascending evaluation order pins the tie-break to the lower index.
    std::sort(out.begin(), out.end());
    return out;
  }

  std::int32_t make_leaf(const std::vector<std::size_t>& rows) {
    double sum = 0.0;
    for (std::size_t r : rows) sum += y[r];
    TreeNode leaf;
    leaf.value = sum / static_cast<double>(rows.size());
    nodes.push_back(leaf);
    return static_cast<std::int32_t>(nodes.size() - 1);
  }

  std::int32_t build(const std::vector<std::size_t>& rows, int depth) {
    const std::size_t n = rows.size();
    bool constant_target = true;
    for (std::size_t r : rows)
      if (y[r] != y[rows[0]]) {
        constant_target = false;
        break;
      }
    if (n < 2 * static_cast<std::size_t>(min_leaf) || constant_target ||
        (max_depth >= 0 && depth >= max_depth)) {
      return make_leaf(rows);
    }

    double best_sse = std::numeric_limits<double>::infinity();
    std::size_t best_feature = 0;
    double best_threshold = 0.0;
    bool found = false;

    for (std::size_t f : draw_features()) {
      sorted.clear();
      for (std::size_t r : rows) sorted.emplace_back(x.at(r, f), y[r]);
      std::sort(sorted.begin(), sorted.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (sorted.front().first == sorted.back().first) continue;

      // Prefix scan; candidate boundaries sit between distinct values.
      double sum_l = 0.0, sq_l = 0.0;
      double sum_total = 0.0, sq_total = 0.0;
      for (const auto& [v, t] : sorted) {
        sum_total += t;
        sq_total += t * t;
      }
      for (std::size_t i = 0; i + 1 < n; ++i) {
        sum_l += sorted[i].second;
        sq_l += sorted[i].second * sorted[i].second;
        if (sorted[i].first == sorted[i + 1].first) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = n - nl;
        if (nl < static_cast<std::size_t>(min_leaf) ||
            nr < static_cast<std::size_t>(min_leaf))
          continue;
        const double sum_r = sum_total - sum_l;
        const double sq_r = sq_total - sq_l;
        const double sse = (sq_l - sum_l * sum_l / static_cast<double>(nl)) +
                           (sq_r - sum_r * sum_r / static_cast<double>(nr));
        if (sse < best_sse) {  // strict: earlier (feature, threshold) wins ties
          best_sse = sse;
          best_feature = f;
          best_threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
          found = true;
        }
      }
    }

    if (!found) return make_leaf(rows);

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows)
      (x.at(r, best_feature) <= best_threshold ? left_rows : right_rows)
          .push_back(r);

    const std::int32_t idx = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    nodes[static_cast<std::size_t>(idx)].feature =
        static_cast<std::int32_t>(best_feature);
    nodes[static_cast<std::size_t>(idx)].threshold = best_threshold;
    const std::int32_t left = build(left_rows, depth + 1);
    const std::int32_t right = build(right_rows, depth + 1);
    nodes[static_cast<std::size_t>(idx)].left = left;
    nodes[static_cast<std::size_t>(idx)].right = right;
    return idx;
  }
};

RegressionTree fit_tree_rows(const Matrix& x, std::span<const double> y,
                             const std::vector<std::size_t>& rows,
                             const ForestParams& params, SplitMix64& rng) {
  TreeBuilder builder(x, y, params.max_depth, params.min_samples_leaf,
                      params.resolved_mtry(x.cols), rng);
  builder.build(rows, 0);
  RegressionTree tree;
  tree.nodes = std::move(builder.nodes);
  return tree;
}

}  // namespace

RegressionTree fit_tree(const Matrix& x, std::span<const double> y,
                        const ForestParams& params, SplitMix64& rng) {
  if (x.rows == 0) fail(Errc::empty_input, "cannot fit a tree on zero rows");
  if (x.rows != y.size())
    fail(Errc::dimension_mismatch, "target length does not match row count");
  params.validate(x.cols);
  std::vector<std::size_t> rows(x.rows);
  std::iota(rows.begin(), rows.end(), 0);
  return fit_tree_rows(x, y, rows, params, rng);
}

Forest fit_forest(const Matrix& x, std::span<const double> y,
                  const ForestParams& params, Modality modality,
                  bool includes_gender, int n_jobs) {
  if (x.rows == 0) fail(Errc::empty_input, "cannot fit a forest on zero rows");
  if (x.rows != y.size())
    fail(Errc::dimension_mismatch, "target length does not match row count");
  params.validate(x.cols);

  Forest forest;
  forest.params = params;
  forest.params.mtry = params.resolved_mtry(x.cols);
  forest.modality = modality;
  forest.includes_gender = includes_gender;
  forest.n_features = x.cols;
  forest.trees.resize(static_cast<std::size_t>(params.n_trees));

  util::parallel_for(
      static_cast<std::size_t>(params.n_trees), n_jobs, [&](std::size_t i) {
        SplitMix64 rng(mix_seed(params.seed, i));
        std::vector<std::size_t> rows(x.rows);
        if (params.bootstrap) {
          for (auto& r : rows) r = rng.next_below(x.rows);
        } else {
          std::iota(rows.begin(), rows.end(), 0);
        }
        forest.trees[i] = fit_tree_rows(x, y, rows, forest.params, rng);
      });
  return forest;
}

PredictionWithConfidence Forest::predict(std::span<const double> x) const {
  if (x.size() != n_features)
    fail(Errc::dimension_mismatch,
         to_string(modality) + " model expects " + std::to_string(n_features) +
             " features, got " + std::to_string(x.size()));
  double sum = 0.0;
  std::vector<double> outputs;
  outputs.reserve(trees.size());
  for (const auto& tree : trees) {
    outputs.push_back(tree.predict(x));
    sum += outputs.back();
  }
  PredictionWithConfidence p;
  p.modality = modality;
  p.mean = sum / static_cast<double>(outputs.size());
  double ss = 0.0;
  for (double o : outputs) ss += (o - p.mean) * (o - p.mean);
  p.stddev = std::sqrt(ss / static_cast<double>(outputs.size()));
  return p;
}

namespace {

constexpr char kMagic[8] = {'M', 'M', 'S', 'E', 'V', 'F', 'O', 'R'};
constexpr std::uint32_t kVersion = 1;

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_i32(std::string& out, std::int32_t v) {
  put_u32(out, static_cast<std::uint32_t>(v));
}

void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

struct ByteReader {
  std::string_view data;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > data.size())
      fail(Errc::corrupt_model, "model stream truncated");
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data[pos++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(data[pos++])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(data[pos++])) << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace

std::string serialize_model(const Forest& forest) {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, kVersion);
  put_i32(out, forest.params.n_trees);
  put_i32(out, forest.params.max_depth);
  put_i32(out, forest.params.min_samples_leaf);
  put_i32(out, forest.params.mtry);
  put_u8(out, forest.params.bootstrap ? 1 : 0);
  put_u64(out, forest.params.seed);
  put_u8(out, static_cast<std::uint8_t>(forest.modality));
  put_u8(out, forest.includes_gender ? 1 : 0);
  put_u64(out, forest.n_features);
  put_u64(out, forest.trees.size());
  for (const auto& tree : forest.trees) {
    put_u64(out, tree.nodes.size());
    for (const auto& n : tree.nodes) {
      put_i32(out, n.feature);
      put_f64(out, n.threshold);
      put_f64(out, n.value);
      put_i32(out, n.left);
      put_i32(out, n.right);
    }
  }
  return out;
}

Forest deserialize_model(std::string_view bytes) {
  ByteReader r{bytes};
  r.need(sizeof(kMagic));
  if (bytes.substr(0, sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic)))
    fail(Errc::corrupt_model, "bad magic; not a model file");
  r.pos = sizeof(kMagic);
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    fail(Errc::version_mismatch,
         "model version " + std::to_string(version) + ", expected " +
             std::to_string(kVersion));

  Forest forest;
  forest.params.n_trees = r.i32();
  forest.params.max_depth = r.i32();
  forest.params.min_samples_leaf = r.i32();
  forest.params.mtry = r.i32();
  forest.params.bootstrap = r.u8() != 0;
  forest.params.seed = r.u64();
  const std::uint8_t modality = r.u8();
  if (modality > 2) fail(Errc::corrupt_model, "bad modality tag");
  forest.modality = static_cast<Modality>(modality);
  forest.includes_gender = r.u8() != 0;
  forest.n_features = r.u64();

  const std::uint64_t tree_count = r.u64();
  if (tree_count == 0 || tree_count > 1u << 24)
    fail(Errc::corrupt_model, "implausible tree count");
  forest.trees.resize(tree_count);
  for (auto& tree : forest.trees) {
    const std::uint64_t node_count = r.u64();
    if (node_count == 0 || node_count > 1u << 28)
      fail(Errc::corrupt_model, "implausible node count");
    tree.nodes.resize(node_count);
    for (auto& n : tree.nodes) {
      n.feature = r.i32();
      n.threshold = r.f64();
      n.value = r.f64();
      n.left = r.i32();
      n.right = r.i32();
      const auto in_range = [&](std::int32_t c) {
        return c >= 0 && static_cast<std::uint64_t>(c) < node_count;
      };
      if (!n.is_leaf() && (!in_range(n.left) || !in_range(n.right)))
        fail(Errc::corrupt_model, "child index out of range");
    }
  }
  if (r.pos != bytes.size())
    fail(Errc::corrupt_model, "trailing bytes after model payload");
  return forest;
}

void save_model(const std::filesystem::path& path, const Forest& forest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write " + path.string());
  const std::string bytes = serialize_model(forest);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(Errc::io_error, "failed writing " + path.string());
}

Forest load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace mmsev::forest
