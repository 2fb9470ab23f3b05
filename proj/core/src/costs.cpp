#include "homegrid/costs.hpp"

#include <stdexcept>

namespace homegrid {

namespace {

double at(const std::vector<double>& x, int id) {
  if (id < 0 || id >= static_cast<int>(x.size()))
    throw std::out_of_range("assignment does not cover variable id");
  return x[static_cast<std::size_t>(id)];
}

}  // namespace

double energy_cost(const ModelInstance& m, const std::vector<double>& x, const Scenario& s,
                   int household) {
  double cost = 0.0;
  for (int h = 1; h <= s.horizon_slots; ++h) {
    const int ge = m.find_var(VarRole::GridEnergy, household, -1, h);
    if (ge < 0) throw std::invalid_argument("model has no grid variable for this household");
    cost += s.grid_price[h - 1] * at(x, ge);
    const int me = m.find_var(VarRole::TradeEnergy, household, -1, h);
    if (me >= 0) {
      const int mp = m.find_var(VarRole::TradePrice, -1, -1, h);
      if (mp >= 0) cost += at(x, mp) * at(x, me);
    }
  }
  return cost;
}

double disutility_cost(const ModelInstance& m, const std::vector<double>& x, const Scenario& s,
                       int household) {
  const Household& hh = s.households[household];
  double cost = 0.0;
  for (std::size_t i = 0; i < hh.appliances.size(); ++i) {
    const Appliance& a = hh.appliances[i];
    const int tau = m.find_var(VarRole::EndSlot, household, static_cast<int>(i), -1);
    if (tau < 0) throw std::invalid_argument("model has no end-slot variable for appliance");
    cost += a.disutility_factor * (at(x, tau) - (a.reservation_slot + a.duration - 1));
  }
  return cost;
}

std::vector<double> storage_trajectory(const ModelInstance& m, const std::vector<double>& x,
                                       const Scenario& s, int household) {
  const StorageSpec& st = s.households[household].storage;
  std::vector<double> level(static_cast<std::size_t>(s.horizon_slots), 0.0);
  double carry = st.initial_energy;
  for (int h = 1; h <= s.horizon_slots; ++h) {
    const int ic = m.find_var(VarRole::ChargeFlag, household, -1, h);
    const int be = m.find_var(VarRole::StorageDraw, household, -1, h);
    if (ic < 0 || be < 0)
      throw std::invalid_argument("model has no storage variables for this household");
    carry = carry * st.retention + at(x, ic) * st.charge_power * st.efficiency - at(x, be);
    level[static_cast<std::size_t>(h - 1)] = carry;
  }
  return level;
}

double objective_value(const ModelInstance& m, const std::vector<double>& x) {
  double v = m.objective_offset;
  for (const auto& [id, c] : m.objective) v += c * at(x, id);
  for (const BilinearTerm& t : m.bilinear_terms)
    if (t.row < 0) v += t.coeff * at(x, t.a) * at(x, t.b);
  return v;
}

}  // namespace homegrid
