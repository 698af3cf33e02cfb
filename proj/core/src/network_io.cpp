#include "diagbound/network_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace diagbound {

using nlohmann::json;

namespace {

double number_field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number())
    throw InputError(where + ": missing numeric field '" + key + "'");
  return it->get<double>();
}

std::string string_field(const json& obj, const char* key,
                         const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    throw InputError(where + ": missing string field '" + key + "'");
  return it->get<std::string>();
}

DiseaseId disease_ref(const json& value, const Network& network,
                      const std::string& where) {
  if (value.is_number_integer()) {
    auto idx = value.get<long long>();
    if (idx < 0) throw InputError(where + ": negative disease index");
    return static_cast<DiseaseId>(idx);
  }
  if (value.is_string()) {
    std::size_t idx = network.find_disease(value.get<std::string>());
    if (idx == npos)
      throw InputError(where + ": unknown disease '" + value.get<std::string>() + "'");
    return static_cast<DiseaseId>(idx);
  }
  throw InputError(where + ": disease reference must be an index or a name");
}

}  // namespace

Network parse_network(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("network file: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("network file: expected an object");

  Network network;
  network.mode = doc.contains("mode")
                     ? parse_gate_mode(string_field(doc, "mode", "network"))
                     : GateMode::noisy_or_leaky;

  if (!doc.contains("diseases") || !doc["diseases"].is_array())
    throw InputError("network file: missing 'diseases' array");
  for (std::size_t i = 0; i < doc["diseases"].size(); ++i) {
    const json& d = doc["diseases"][i];
    std::string where = "diseases[" + std::to_string(i) + "]";
    network.diseases.push_back(
        {string_field(d, "name", where), number_field(d, "prior", where)});
  }

  if (!doc.contains("findings") || !doc["findings"].is_array())
    throw InputError("network file: missing 'findings' array");
  for (std::size_t i = 0; i < doc["findings"].size(); ++i) {
    const json& f = doc["findings"][i];
    std::string where = "findings[" + std::to_string(i) + "]";
    Finding finding;
    finding.name = string_field(f, "name", where);
    if (network.mode == GateMode::noisy_or_leaky) {
      finding.leak = f.contains("leak") ? number_field(f, "leak", where) : 0.0;
      if (f.contains("links")) {
        if (!f["links"].is_array())
          throw InputError(where + ": 'links' must be an array");
        for (const json& link : f["links"]) {
          if (!link.contains("disease"))
            throw InputError(where + ": link without 'disease'");
          finding.links.push_back({disease_ref(link["disease"], network, where),
                                   number_field(link, "q", where)});
        }
      }
    } else {
      if (!f.contains("parents") || !f["parents"].is_array() ||
          !f.contains("table") || !f["table"].is_array())
        throw InputError(where + ": tabular finding needs 'parents' and 'table'");
      for (const json& p : f["parents"])
        finding.parents.push_back(disease_ref(p, network, where));
      for (const json& t : f["table"]) {
        if (!t.is_number()) throw InputError(where + ": non-numeric table entry");
        finding.table.push_back(t.get<double>());
      }
    }
    network.findings.push_back(std::move(finding));
  }
  return network;
}

std::string serialize_network(const Network& network) {
  json doc;
  doc["mode"] = to_string(network.mode);
  doc["diseases"] = json::array();
  for (const Disease& d : network.diseases)
    doc["diseases"].push_back({{"name", d.name}, {"prior", d.prior}});
  doc["findings"] = json::array();
  for (const Finding& f : network.findings) {
    json entry;
    entry["name"] = f.name;
    if (network.mode == GateMode::noisy_or_leaky) {
      entry["leak"] = f.leak;
      entry["links"] = json::array();
      for (const Link& link : f.links)
        entry["links"].push_back({{"disease", link.disease}, {"q", link.strength}});
    } else {
      entry["parents"] = f.parents;
      entry["table"] = f.table;
    }
    doc["findings"].push_back(std::move(entry));
  }
  return doc.dump(1) + "\n";
}

Evidence parse_case(const Network& network, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("case file: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("case file: expected an object");

  auto resolve = [&](const char* key) {
    std::vector<FindingId> ids;
    if (!doc.contains(key)) return ids;
    if (!doc[key].is_array())
      throw InputError(std::string("case file: '") + key + "' must be an array");
    for (const json& name : doc[key]) {
      if (!name.is_string())
        throw InputError(std::string("case file: '") + key +
                         "' entries must be finding names");
      std::size_t idx = network.find_finding(name.get<std::string>());
      if (idx == npos)
        throw InputError("case file: unknown finding '" +
                         name.get<std::string>() + "'");
      ids.push_back(static_cast<FindingId>(idx));
    }
    return ids;
  };
  // overlap between the two lists is reported by validate_case
  return make_evidence(resolve("positive"), resolve("negative"));
}

std::string serialize_case(const Network& network, const Evidence& evidence) {
  json doc;
  doc["positive"] = json::array();
  doc["negative"] = json::array();
  for (FindingId f : evidence.positive)
    doc["positive"].push_back(network.findings.at(f).name);
  for (FindingId f : evidence.negative)
    doc["negative"].push_back(network.findings.at(f).name);
  return doc.dump(1) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace diagbound
