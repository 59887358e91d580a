// Copyright 2026 The PlantPulse Authors
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

#include "plantpulse/sim/master_data.h"

#include <set>

#include <json.hpp>

#include "plantpulse/domain/error.h"

namespace plantpulse::sim {

namespace {

template <typename Entity>
std::vector<Entity> named(std::initializer_list<const char*> names) {
  std::vector<Entity> out;
  std::uint64_t id = 1;
  for (const char* n : names) out.push_back({EntityId{id++}, n});
  return out;
}

std::vector<RoutingStep> default_route(const std::vector<Workplace>& workplaces) {
  std::vector<RoutingStep> route;
  for (const char* name : {"Cutting Machine", "Assembly"}) {
    for (const auto& w : workplaces) {
      if (w.name == name) route.push_back({w.id, 5000, 0.2});
    }
  }
  return route;
}

template <typename Entity>
void check_entities(const std::vector<Entity>& rows, const char* what,
                    std::vector<std::string>& out) {
  if (rows.empty()) out.push_back(std::string("no ") + what);
  std::set<std::string> names;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].id.value != i + 1) {
      out.push_back(std::string(what) + " ids must run 1.." + std::to_string(rows.size()));
      break;
    }
    if (rows[i].name.empty()) out.push_back(std::string(what) + " name must not be empty");
    if (!names.insert(rows[i].name).second) {
      out.push_back(std::string("duplicate ") + what + " name '" + rows[i].name + "'");
    }
  }
}

}  // namespace

MasterData MasterData::defaults() {
  MasterData m;
  m.suppliers = named<Supplier>({"Northwind Castings", "Baltic Steel Works", "Rhine Precision Parts"});
  m.customers = named<Customer>({"Elbe Motors", "Havel Marine"});
  m.products = named<Product>({"Engine A", "Engine B"});
  m.materials = named<Material>({"Cast Iron Block", "Forged Crankshaft"});
  m.workplaces = named<Workplace>({"Cutting Machine", "Assembly", "Paint Shop", "Quality Inspection"});
  for (const auto& p : m.products) m.routings[p.id.value] = default_route(m.workplaces);
  return m;
}

std::vector<std::string> MasterData::validate() const {
  std::vector<std::string> out;
  check_entities(suppliers, "suppliers", out);
  check_entities(customers, "customers", out);
  check_entities(products, "products", out);
  check_entities(materials, "materials", out);
  check_entities(workplaces, "workplaces", out);
  for (const auto& p : products) {
    auto it = routings.find(p.id.value);
    if (it == routings.end() || it->second.empty()) {
      out.push_back("product " + p.name + " has no routing");
      continue;
    }
    for (const auto& step : it->second) {
      if (step.workplace_id.value < 1 || step.workplace_id.value > workplaces.size()) {
        out.push_back("routing of " + p.name + " references unknown workplace " +
                      std::to_string(step.workplace_id.value));
      }
      if (step.mean_duration_ms < 1) out.push_back("routing of " + p.name + " has mean < 1 ms");
      if (!(step.duration_jitter >= 0.0 && step.duration_jitter < 1.0)) {
        out.push_back("routing of " + p.name + " has jitter outside [0, 1)");
      }
    }
  }
  for (const auto& [product, steps] : routings) {
    if (product < 1 || product > products.size()) {
      out.push_back("routing for unknown product " + std::to_string(product));
    }
  }
  return out;
}

std::vector<EntityId> MasterData::workplace_ids() const {
  std::vector<EntityId> ids;
  for (const auto& w : workplaces) ids.push_back(w.id);
  return ids;
}

EntityId MasterData::workplace_named(std::string_view name) const {
  for (const auto& w : workplaces) {
    if (w.name == name) return w.id;
  }
  return EntityId{0};
}

MasterData parse_master_data(std::string_view json_text, std::int64_t* arrival_mean_ms) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("malformed master data: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidArgument("master data must be a JSON object");

  std::vector<std::string> errors;
  MasterData m = MasterData::defaults();
  static const std::set<std::string> known = {"suppliers", "customers", "products", "materials",
                                              "workplaces", "routings", "arrival_mean_ms"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) errors.push_back("unknown field '" + key + "'");
  }

  auto names = [&](const char* key, auto& target) {
    if (!doc.contains(key)) return;
    const json& list = doc[key];
    if (!list.is_array()) {
      errors.push_back(std::string(key) + " must be an array of names");
      return;
    }
    target.clear();
    std::uint64_t id = 1;
    for (const auto& n : list) {
      if (!n.is_string()) {
        errors.push_back(std::string(key) + " entries must be strings");
        continue;
      }
      target.push_back({EntityId{id++}, n.get<std::string>()});
    }
  };
  names("suppliers", m.suppliers);
  names("customers", m.customers);
  names("products", m.products);
  names("materials", m.materials);
  names("workplaces", m.workplaces);

  auto find_id = [](const auto& list, const std::string& name) -> std::uint64_t {
    for (const auto& e : list) {
      if (e.name == name) return e.id.value;
    }
    return 0;
  };

  m.routings.clear();
  if (doc.contains("routings")) {
    const json& r = doc["routings"];
    if (!r.is_object()) {
      errors.push_back("routings must map product names to step lists");
    } else {
      for (const auto& [product, steps] : r.items()) {
        std::uint64_t pid = find_id(m.products, product);
        if (pid == 0) {
          errors.push_back("routing for unknown product '" + product + "'");
          continue;
        }
        if (!steps.is_array()) {
          errors.push_back("routing of '" + product + "' must be an array");
          continue;
        }
        std::vector<RoutingStep> route;
        for (const auto& s : steps) {
          if (!s.is_object() || !s.contains("workplace") || !s["workplace"].is_string()) {
            errors.push_back("routing step of '" + product + "' needs a workplace name");
            continue;
          }
          for (const auto& [k, _] : s.items()) {
            if (k != "workplace" && k != "mean_duration_ms" && k != "duration_jitter") {
              errors.push_back("unknown routing field '" + k + "'");
            }
          }
          std::string wname = s["workplace"].get<std::string>();
          std::uint64_t wid = find_id(m.workplaces, wname);
          if (wid == 0) {
            errors.push_back("routing of '" + product + "' uses unknown workplace '" + wname + "'");
            continue;
          }
          RoutingStep step{EntityId{wid}, 5000, 0.2};
          if (s.contains("mean_duration_ms")) {
            if (!s["mean_duration_ms"].is_number_integer()) {
              errors.push_back("mean_duration_ms must be an integer");
            } else {
              step.mean_duration_ms = s["mean_duration_ms"].get<std::int64_t>();
            }
          }
          if (s.contains("duration_jitter")) {
            if (!s["duration_jitter"].is_number()) {
              errors.push_back("duration_jitter must be a number");
            } else {
              step.duration_jitter = s["duration_jitter"].get<double>();
            }
          }
          route.push_back(step);
        }
        m.routings[pid] = std::move(route);
      }
    }
  }
  auto fallback = default_route(m.workplaces);
  for (const auto& p : m.products) {
    if (!m.routings.count(p.id.value)) m.routings[p.id.value] = fallback;
  }

  if (doc.contains("arrival_mean_ms")) {
    const json& a = doc["arrival_mean_ms"];
    if (!a.is_number_integer() || a.get<std::int64_t>() < 1) {
      errors.push_back("arrival_mean_ms must be a positive integer");
    } else if (arrival_mean_ms) {
      *arrival_mean_ms = a.get<std::int64_t>();
    }
  }

  for (auto& e : m.validate()) errors.push_back(std::move(e));
  if (!errors.empty()) {
    std::string message = "invalid master data";
    for (std::size_t i = 0; i < errors.size(); ++i) message += (i ? "; " : ": ") + errors[i];
    throw InvalidArgument(message);
  }
  return m;
}

}  // namespace plantpulse::sim
