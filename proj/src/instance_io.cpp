#include "kxchain/instance_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "kxchain/errors.hpp"

namespace kxchain {

namespace {

void only_fields(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw InvalidInstance(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw InvalidInstance("unknown field '" + key + "' in " + where);
  }
}

template <class T>
T need(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key)) throw InvalidInstance(std::string("missing field '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInstance(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

nlohmann::json instance_to_json(const Instance& instance) {
  auto edges = nlohmann::json::array();
  for (const auto& e : instance.base_edges()) edges.push_back({e.from, e.to});
  return {{"n", instance.node_count()},
          {"altruist", instance.altruist()},
          {"owners", instance.owners()},
          {"base_edges", edges},
          {"p", instance.edge_probability().text()}};
}

nlohmann::json instance_to_json(const GeneratedInstance& generated) {
  auto doc = instance_to_json(*generated.instance);
  if (generated.family.empty() && generated.certificates.empty()) return doc;
  auto items = nlohmann::json::array();
  for (const auto& c : generated.certificates) {
    items.push_back({{"name", c.name},
                     {"relation", c.relation},
                     {"value", c.value},
                     {"s", c.s ? nlohmann::json(*c.s) : nlohmann::json()},
                     {"status", to_string(c.status)}});
  }
  doc["certificates"] = {{"family", generated.family}, {"params", generated.params}, {"items", items}};
  return doc;
}

GeneratedInstance instance_from_json(const nlohmann::json& doc) {
  only_fields(doc, {"n", "altruist", "owners", "base_edges", "p", "certificates"}, "instance");
  const auto n = need<std::size_t>(doc, "n");
  const auto altruist = need<NodeId>(doc, "altruist");
  const auto owners = need<std::vector<HospitalId>>(doc, "owners");
  const auto pairs = need<std::vector<std::vector<NodeId>>>(doc, "base_edges");
  if (!doc.contains("p") || !doc.at("p").is_string()) throw InvalidInstance("field 'p' must be a decimal string");
  const auto p = Probability::parse(doc.at("p").get<std::string>());
  std::vector<Edge> edges;
  for (const auto& pair : pairs) {
    if (pair.size() != 2) throw InvalidInstance("base edges must be [u, v] pairs");
    edges.push_back({pair[0], pair[1]});
  }
  if (owners.size() != n) throw InvalidInstance("owners has " + std::to_string(owners.size()) + " entries, n is " + std::to_string(n));
  GeneratedInstance out;
  out.instance = std::make_shared<const Instance>(n, owners, edges, altruist, p);
  if (doc.contains("certificates")) {
    const auto& cert = doc.at("certificates");
    only_fields(cert, {"family", "params", "items"}, "certificates");
    out.family = need<std::string>(cert, "family");
    out.params = cert.value("params", nlohmann::json::object());
    for (const auto& item : cert.value("items", nlohmann::json::array())) {
      only_fields(item, {"name", "relation", "value", "s", "status"}, "certificate");
      Certificate c;
      c.name = need<std::string>(item, "name");
      c.relation = need<std::string>(item, "relation");
      c.value = need<std::size_t>(item, "value");
      if (item.contains("s") && !item.at("s").is_null()) c.s = item.at("s").get<std::size_t>();
      const auto status = need<std::string>(item, "status");
      if (status != "verified" && status != "constructed") throw InvalidInstance("unknown certificate status");
      c.status = status == "verified" ? CertificateStatus::kVerified : CertificateStatus::kConstructed;
      out.certificates.push_back(std::move(c));
    }
  }
  return out;
}

GeneratedInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInstance(path + ": " + e.what());
  }
  return instance_from_json(doc);
}

void write_instance_file(const std::string& path, const GeneratedInstance& generated) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << instance_to_json(generated).dump(2) << '\n';
  if (!out) throw std::ios_base::failure("write failed for " + path);
}

}  // namespace kxchain
