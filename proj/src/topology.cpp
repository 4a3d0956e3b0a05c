#include "topofuse/topology.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace topofuse {

PathSystem build_path_system(const std::vector<MessageCopy>& copies) {
  if (copies.empty()) throw Error(Errc::EmptyInput, "no message copies");

  PathSystem ps;
  // retained rows in input order, deduplicated by (path, content)
  std::map<std::vector<VehicleId>, int> seen; // path -> content
  std::vector<int> retained;                  // indices into copies
  for (size_t idx = 0; idx < copies.size(); ++idx) {
    const MessageCopy& mc = copies[idx];
    if (mc.content != 0 && mc.content != 1)
      throw Error(Errc::InvalidCopy, "content must be 0 or 1");
    std::set<VehicleId> uniq(mc.path.begin(), mc.path.end());
    if (uniq.size() != mc.path.size())
      throw Error(Errc::InvalidCopy, "relay path contains a repeated vehicle id");
    auto it = seen.find(mc.path);
    if (it != seen.end()) {
      if (it->second != mc.content)
        throw Error(Errc::DuplicateConflict, "identical path delivered both contents");
      continue; // duplicate copy carries no new information
    }
    seen.emplace(mc.path, mc.content);
    if (mc.path.empty()) {
      ps.direct_content = mc.content; // source is honest; incorruptible evidence
      continue;
    }
    retained.push_back(static_cast<int>(idx));
  }

  // content-1 rows first, then content-0, preserving relative input order
  std::stable_sort(retained.begin(), retained.end(), [&](int a, int b) {
    return copies[a].content > copies[b].content;
  });

  std::set<VehicleId> vids;
  for (int idx : retained)
    for (VehicleId v : copies[idx].path) vids.insert(v);

  ps.k = static_cast<int>(retained.size());
  ps.n = static_cast<int>(vids.size());
  ps.vehicle_ids.assign(vids.begin(), vids.end());
  std::map<VehicleId, int> col;
  for (int c = 0; c < ps.n; ++c) col[ps.vehicle_ids[c]] = c;

  ps.matrix = BoolMatrix(ps.k, ps.n);
  for (int r = 0; r < ps.k; ++r) {
    const MessageCopy& mc = copies[retained[r]];
    ps.path_ids.push_back(retained[r]);
    ps.contents.push_back(mc.content);
    ps.hops.push_back(mc.hops());
    ps.paths.push_back(mc.path);
    for (VehicleId v : mc.path) ps.matrix.set(r, col[v]);
  }
  return ps;
}

Partition make_partition(const PathSystem& ps) {
  Partition pt;
  pt.k1 = ps.k1();
  pt.n = ps.n;

  std::vector<bool> on1(ps.n, false), on0(ps.n, false);
  for (int r = 0; r < ps.k; ++r)
    for (int c = 0; c < ps.n; ++c)
      if (ps.matrix.at(r, c)) (ps.contents[r] ? on1 : on0)[c] = true;

  std::vector<int> colpos(ps.n, -1); // position within its side
  for (int c = 0; c < ps.n; ++c) {
    if (on1[c] && on0[c]) {
      pt.type2.push_back(c);
    } else if (on1[c]) {
      colpos[c] = static_cast<int>(pt.type1.size());
      pt.type1.push_back(c);
    } else {
      colpos[c] = static_cast<int>(pt.type0.size());
      pt.type0.push_back(c);
    }
  }
  pt.n1 = static_cast<int>(pt.type1.size());
  pt.n0 = static_cast<int>(pt.type0.size());
  pt.n2 = static_cast<int>(pt.type2.size());

  pt.b1 = BoolMatrix(pt.k1, pt.n1);
  pt.b0 = BoolMatrix(ps.k - pt.k1, pt.n0);
  int r1 = 0, r0 = 0;
  std::vector<int> side(ps.n, -1);
  for (int c : pt.type1) side[c] = 1;
  for (int c : pt.type0) side[c] = 0;
  std::map<VehicleId, int> col;
  for (int c = 0; c < ps.n; ++c) col[ps.vehicle_ids[c]] = c;

  for (int r = 0; r < ps.k; ++r) {
    std::vector<int> ordered;
    int want = ps.contents[r];
    for (VehicleId v : ps.paths[r]) {
      int c = col.at(v);
      if (side[c] == want) ordered.push_back(colpos[c]);
    }
    if (want == 1) {
      for (int cc : ordered) pt.b1.set(r1, cc);
      pt.b1_rows_ordered.push_back(ordered);
      ++r1;
    } else {
      for (int cc : ordered) pt.b0.set(r0, cc);
      pt.b0_rows_ordered.push_back(ordered);
      ++r0;
    }
  }
  return pt;
}

}  // namespace topofuse
