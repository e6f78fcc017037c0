// Copyright 2026 The mdoc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mdoc/control_set.hpp"

#include <utility>

#include "mdoc/errors.hpp"

namespace mdoc {

ControlSet ControlSet::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw InvalidArgument("box bounds must be nonempty and of equal length");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) {
      throw InvalidArgument("box bounds require lower <= upper componentwise");
    }
  }
  ControlSet set;
  set.set_ = Box{std::move(lower), std::move(upper)};
  return set;
}

ControlSet ControlSet::oracle(std::function<Vector(const Vector&)> projection) {
  if (!projection) throw InvalidArgument("convex oracle needs a projection");
  ControlSet set;
  set.set_ = ConvexOracle{std::move(projection)};
  return set;
}

Vector ControlSet::project(const Vector& v) const {
  if (const auto* b = std::get_if<Box>(&set_)) {
    if (v.size() != b->lower.size()) {
      throw InvalidArgument("control dimension does not match box bounds");
    }
    return v.cwiseMax(b->lower).cwiseMin(b->upper);
  }
  if (const auto* o = std::get_if<ConvexOracle>(&set_)) return o->projection(v);
  return v;
}

bool ControlSet::contains(const Vector& v, double tol) const {
  if (is_unconstrained()) return v.allFinite();
  return (v - project(v)).norm() <= tol;
}

Eigen::Index ControlSet::dimension_hint() const {
  if (const auto* b = std::get_if<Box>(&set_)) return b->lower.size();
  return -1;
}

}  // namespace mdoc
