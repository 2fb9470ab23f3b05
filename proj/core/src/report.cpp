#include "homegrid/report.hpp"

#include "homegrid/costs.hpp"
#include "homegrid/model_build.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace homegrid {

namespace {

struct Series {
  std::string section;
  std::string name;
  std::vector<double> values;
};

struct Ledger {
  int household = 0;
  std::vector<Series> series;
  double energy = 0.0;
  double disutility = 0.0;
  double total = 0.0;
};

std::string money(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v + 0.0);  // +0.0 normalizes -0
  return buf;
}

std::vector<double> slot_values(const ModelInstance& m, const std::vector<double>& x,
                                VarRole role, int household, int appliance, int n) {
  std::vector<double> out(n, 0.0);
  for (int h = 1; h <= n; ++h) {
    const int id = m.find_var(role, household, appliance, h);
    if (id >= 0) out[h - 1] = x[id];
  }
  return out;
}

std::vector<Ledger> build_ledgers(const ModelInstance& m, const std::vector<double>& x,
                                  const Scenario& s) {
  if (x.size() != m.variables.size())
    throw std::invalid_argument("report: assignment does not match the model");
  const int n = s.horizon_slots;

  std::vector<int> households;
  for (const Variable& v : m.variables)
    if (v.meta.role == VarRole::GridEnergy && v.meta.slot == 1)
      households.push_back(v.meta.household);

  std::vector<Ledger> out;
  for (const int k : households) {
    const Household& hh = s.households[k];
    const bool trading = m.find_var(VarRole::TradeEnergy, k, -1, 1) >= 0;
    Ledger led;
    led.household = k;

    led.series.push_back({"Price", "Grid", s.grid_price});
    if (trading)
      led.series.push_back({"Price", "Microgrid", slot_values(m, x, VarRole::TradePrice, -1, -1, n)});

    led.series.push_back(
        {"Energy Availability", "Grid", std::vector<double>(n, hh.grid_limit)});
    led.series.push_back(
        {"Energy Availability", "Storage", slot_values(m, x, VarRole::StoredEnergy, k, -1, n)});
    led.series.push_back({"Energy Availability", "Renewables", hh.renewable});
    if (trading)
      led.series.push_back(
          {"Microgrid", "(Demand/Availability)", slot_values(m, x, VarRole::TradeQuota, k, -1, n)});

    led.series.push_back({"Energy Source", "Grid", slot_values(m, x, VarRole::GridEnergy, k, -1, n)});
    led.series.push_back(
        {"Energy Source", "Storage", slot_values(m, x, VarRole::StorageDraw, k, -1, n)});
    led.series.push_back(
        {"Energy Source", "Renewables", slot_values(m, x, VarRole::RenewableUsed, k, -1, n)});
    if (trading)
      led.series.push_back(
          {"Microgrid", "(Source/Load)", slot_values(m, x, VarRole::TradeEnergy, k, -1, n)});

    led.series.push_back(
        {"Load", "Storage Charging", slot_values(m, x, VarRole::ChargeFlag, k, -1, n)});
    for (int i = 0; i < static_cast<int>(hh.appliances.size()); ++i)
      led.series.push_back({"Load", "App" + std::to_string(i + 1),
                            slot_values(m, x, VarRole::RunFlag, k, i, n)});

    led.energy = energy_cost(m, x, s, k);
    led.disutility = disutility_cost(m, x, s, k);
    led.total = led.energy + led.disutility;
    out.push_back(std::move(led));
  }
  return out;
}

std::string render_table(const std::vector<Ledger>& ledgers, int n) {
  std::ostringstream out;
  const int label_w = 34;
  const int col_w = 8;
  for (const Ledger& led : ledgers) {
    out << "Household " << led.household + 1 << "\n";
    std::ostringstream head;
    head << "Timeslot";
    out << head.str() << std::string(label_w - head.str().size(), ' ');
    for (int h = 1; h <= n; ++h) {
      const std::string v = std::to_string(h);
      out << std::string(col_w - v.size(), ' ') << v;
    }
    out << "\n" << std::string(label_w + col_w * n, '-') << "\n";
    std::string last_section;
    for (const Series& ser : led.series) {
      std::string label;
      if (ser.section != last_section) {
        label = ser.section + "  " + ser.name;
        last_section = ser.section;
      } else {
        label = std::string(ser.section.size(), ' ') + "  " + ser.name;
      }
      if (label.size() > static_cast<std::size_t>(label_w - 1))
        label.resize(label_w - 1);
      out << label << std::string(label_w - label.size(), ' ');
      for (double v : ser.values) {
        const std::string cell = money(v);
        out << std::string(col_w - cell.size(), ' ') << cell;
      }
      out << "\n";
    }
    out << std::string(label_w + col_w * n, '-') << "\n";
    out << "Energy Cost = " << money(led.energy) << ", Disutility Cost = "
        << money(led.disutility) << ", and Total Cost = " << money(led.total) << "\n\n";
  }
  return out.str();
}

std::string render_csv(const std::vector<Ledger>& ledgers) {
  std::ostringstream out;
  out.precision(17);
  out << "household,section,series,slot,value\n";
  for (const Ledger& led : ledgers) {
    for (const Series& ser : led.series)
      for (std::size_t h = 0; h < ser.values.size(); ++h)
        out << led.household + 1 << ",\"" << ser.section << "\",\"" << ser.name << "\","
            << h + 1 << "," << ser.values[h] << "\n";
    out << led.household + 1 << ",\"Cost\",\"Energy\",," << led.energy << "\n";
    out << led.household + 1 << ",\"Cost\",\"Disutility\",," << led.disutility << "\n";
    out << led.household + 1 << ",\"Cost\",\"Total\",," << led.total << "\n";
  }
  return out.str();
}

nlohmann::json ledgers_json(const std::vector<Ledger>& ledgers) {
  nlohmann::json doc = nlohmann::json::array();
  for (const Ledger& led : ledgers) {
    nlohmann::json jl;
    jl["household"] = led.household + 1;
    jl["series"] = nlohmann::json::array();
    for (const Series& ser : led.series)
      jl["series"].push_back({{"section", ser.section}, {"name", ser.name}, {"values", ser.values}});
    jl["costs"] = {{"energy", led.energy}, {"disutility", led.disutility}, {"total", led.total}};
    doc.push_back(std::move(jl));
  }
  return doc;
}

std::string render(const std::vector<Ledger>& ledgers, int n, ReportFormat format) {
  switch (format) {
    case ReportFormat::Table: return render_table(ledgers, n);
    case ReportFormat::Csv: return render_csv(ledgers);
    case ReportFormat::Json: return ledgers_json(ledgers).dump(2) + "\n";
  }
  return {};
}

}  // namespace

std::string emit_report(const ModelInstance& m, const std::vector<double>& x, const Scenario& s,
                        ReportFormat format) {
  return render(build_ledgers(m, x, s), s.horizon_slots, format);
}

std::string emit_report(const ParetoResult& r, const Scenario& s, ReportFormat format) {
  if (r.traded.assignment.empty())
    throw std::invalid_argument("report: the trading result carries no assignment");
  const ModelInstance m = r.ceilings_used.empty() ? build_unified_model(s)
                                                  : build_unified_model(s, r.ceilings_used);
  const std::vector<Ledger> ledgers = build_ledgers(m, r.traded.assignment, s);

  double energy = 0.0, disutility = 0.0;
  for (const Ledger& led : ledgers) {
    energy += led.energy;
    disutility += led.disutility;
  }

  if (format == ReportFormat::Table) {
    std::ostringstream out;
    out << render_table(ledgers, s.horizon_slots);
    out << "Combined: Energy Cost = " << money(energy) << ", Disutility Cost = "
        << money(disutility) << ", and Total Cost = " << money(energy + disutility) << "\n";
    return out.str();
  }
  if (format == ReportFormat::Csv) {
    std::ostringstream out;
    out.precision(17);
    out << render_csv(ledgers);
    out << "all,\"Cost\",\"Energy\",," << energy << "\n";
    out << "all,\"Cost\",\"Disutility\",," << disutility << "\n";
    out << "all,\"Cost\",\"Total\",," << energy + disutility << "\n";
    return out.str();
  }
  nlohmann::json doc;
  doc["households"] = ledgers_json(ledgers);
  doc["combined"] = {{"energy", energy}, {"disutility", disutility}, {"total", energy + disutility}};
  doc["stand_alone_costs"] = r.no_trade_costs;
  return doc.dump(2) + "\n";
}

}  // namespace homegrid
