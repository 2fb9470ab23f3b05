#include "homegrid/model.hpp"

#include <algorithm>

namespace homegrid {

int ModelInstance::find_var(VarRole role, int household, int appliance, int slot) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const VarMeta& m = variables[i].meta;
    if (m.role == role && m.household == household && m.appliance == appliance &&
        m.slot == slot)
      return static_cast<int>(i);
  }
  return -1;
}

std::size_t ModelInstance::count_rows(RowRole role) const {
  return static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(), [role](const LinearRow& r) { return r.meta.role == role; }));
}

}  // namespace homegrid
