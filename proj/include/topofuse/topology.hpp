#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "topofuse/errors.hpp"

namespace topofuse {

using VehicleId = int;

// One received message copy: content bit plus the ordered relay path that
// carried it (source and destination excluded).
struct MessageCopy {
  int content = 0;
  std::vector<VehicleId> path;

  int hops() const { return static_cast<int>(path.size()) + 1; }
};

// Row-major boolean matrix with rows packed into 64-bit words.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  BoolMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), words_per_row_((cols + 63) / 64), bits_(static_cast<size_t>(rows) * words_per_row_, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void set(int r, int c) { bits_[static_cast<size_t>(r) * words_per_row_ + c / 64] |= (1ULL << (c % 64)); }
  bool at(int r, int c) const {
    return (bits_[static_cast<size_t>(r) * words_per_row_ + c / 64] >> (c % 64)) & 1ULL;
  }

  std::vector<int> row_support(int r) const {
    std::vector<int> out;
    for (int c = 0; c < cols_; ++c)
      if (at(r, c)) out.push_back(c);
    return out;
  }

 private:
  int rows_ = 0, cols_ = 0, words_per_row_ = 0;
  std::vector<uint64_t> bits_;
};

// The k x n path-membership topology matrix together with its index maps.
// Rows are retained (deduplicated, relayed) copies ordered content-1 first;
// columns are distinct relay vehicles in ascending id order. Relay-free
// copies never enter the matrix: their content is kept aside as direct,
// incorruptible evidence.
struct PathSystem {
  int k = 0;
  int n = 0;
  BoolMatrix matrix;
  std::vector<int> path_ids;          // row -> index into the original copies
  std::vector<VehicleId> vehicle_ids; // column -> vehicle id
  std::vector<int> contents;          // row -> content bit
  std::vector<int> hops;              // row -> hop count of that copy
  std::vector<std::vector<VehicleId>> paths; // row -> ordered relay ids
  std::optional<int> direct_content;  // content of relay-free copies, if any

  int k1() const {
    int c = 0;
    for (int b : contents) c += b;
    return c;
  }
  bool conflicting() const {
    int c = k1();
    return c > 0 && c < k;
  }
};

// The  B = [[B1, Bs1, 0], [0, Bs0, B0]]  column classification. type1/type0/
// type2 hold column indices of the parent PathSystem; b1 and b0 are the
// content-1 x Type-1 and content-0 x Type-0 restrictions.
struct Partition {
  int k1 = 0;
  std::vector<int> type1, type0, type2; // column indices, ascending
  int n1 = 0, n0 = 0, n2 = 0;
  int n = 0;
  BoolMatrix b1; // rows: content-1 paths, cols: type1
  BoolMatrix b0; // rows: content-0 paths, cols: type0
  // ordered relay sequences restricted to the side's exclusive columns,
  // as column indices of b1/b0 (for union-graph diagnostics)
  std::vector<std::vector<int>> b1_rows_ordered;
  std::vector<std::vector<int>> b0_rows_ordered;
};

// Builds the topology matrix from received copies. Duplicate (path, content)
// copies are dropped; the same path with both contents is impossible under
// the deterministic tamper model and is rejected as corrupted input.
PathSystem build_path_system(const std::vector<MessageCopy>& copies);

Partition make_partition(const PathSystem& ps);

}  // namespace topofuse
