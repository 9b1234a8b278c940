#include "sipg/wire.hpp"

namespace sipg::wire {

const char* toString(Variant v) {
  switch (v) {
    case Variant::Sync1A: return "1A";
    case Variant::Sync1B: return "1B";
    case Variant::Async2: return "2";
  }
  return "?";
}

std::optional<Variant> parseVariant(std::string_view text) {
  if (text == "1A" || text == "1" || text == "1a") return Variant::Sync1A;
  if (text == "1B" || text == "1b") return Variant::Sync1B;
  if (text == "2") return Variant::Async2;
  return std::nullopt;
}

std::string encodeFrame(const Json& message) {
  const std::string body = message.dump();
  const auto n = static_cast<std::uint32_t>(body.size());
  std::string out;
  out.reserve(body.size() + 4);
  out.push_back(static_cast<char>((n >> 24) & 0xff));
  out.push_back(static_cast<char>((n >> 16) & 0xff));
  out.push_back(static_cast<char>((n >> 8) & 0xff));
  out.push_back(static_cast<char>(n & 0xff));
  out += body;
  return out;
}

void FrameDecoder::feed(std::string_view bytes) { buffer_.append(bytes); }

std::optional<Json> FrameDecoder::next() {
  if (buffer_.size() < 4) return std::nullopt;
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) n = (n << 8) | static_cast<unsigned char>(buffer_[i]);
  if (n > kMaxFrameBytes) throw Error(ErrorCode::Malformed, "frame of " + std::to_string(n) + " bytes");
  if (buffer_.size() < 4 + static_cast<std::size_t>(n)) return std::nullopt;
  const std::string body = buffer_.substr(4, n);
  buffer_.erase(0, 4 + static_cast<std::size_t>(n));
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::Malformed, "frame is not a JSON object");
  return j;
}

Json message(std::string_view kind, std::string_view federateId) {
  return Json{{"kind", kind}, {"protocolVersion", kProtocolVersion}, {"federateId", federateId}};
}

Json errorMessage(std::string_view federateId, ErrorCode code, std::string_view text) {
  Json m = message("error", federateId);
  m["code"] = toString(code);
  m["message"] = text;
  return m;
}

Json keyPair(FlowKey key) { return Json::array({info(key).className, info(key).attribute}); }

std::optional<FlowKey> parseKeyPair(const Json& pair) {
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
    return std::nullopt;
  }
  return findFlowKey(pair[0].get<std::string>(), pair[1].get<std::string>());
}

Json toMessage(const AttributeUpdate& u, std::string_view federateId) {
  Json m = message("attr_update", federateId);
  const auto& i = info(u.key);
  m["publisher"] = u.federateId;
  m["className"] = i.className;
  m["attribute"] = i.attribute;
  m["objectName"] = u.objectName;
  m["value"] = u.value;
  m["units"] = i.units;
  m["year"] = u.year;
  m["iteration"] = u.iteration;
  return m;
}

Json ledgerRows(const FlowLedger& ledger) {
  Json rows = Json::array();
  for (const auto& [k, v] : ledger.entries()) {
    rows.push_back({{"year", k.year}, {"iteration", k.iteration}, {"object", k.object},
                    {"key", keyName(k.key)}, {"value", v}});
  }
  return rows;
}

FlowLedger parseLedgerRows(const Json& rows) {
  if (!rows.is_array()) throw Error(ErrorCode::Malformed, "ledger rows must be an array");
  FlowLedger out;
  for (const auto& r : rows) {
    const auto key = parseKeyName(stringField(r, "key"));
    if (!key) throw Error(ErrorCode::Malformed, "unknown ledger key " + stringField(r, "key"));
    try {
      out.set(intField(r, "year"), intField(r, "iteration"), stringField(r, "object"), *key,
              numberField(r, "value"));
    } catch (const Error& e) {
      throw Error(ErrorCode::Malformed, e.what());
    }
  }
  return out;
}

Json toJson(const objectives::ObjectiveReport& r) {
  return Json{{"year", r.year},
              {"food", r.food},
              {"aquifer", r.aquifer},
              {"reservoir", r.reservoir},
              {"financial", r.financial},
              {"political", r.political},
              {"joint", r.joint},
              {"budgetViolations", r.budgetViolations}};
}

objectives::ObjectiveReport reportFromJson(const Json& j) {
  objectives::ObjectiveReport r;
  r.year = intField(j, "year");
  r.food = numberField(j, "food");
  r.aquifer = numberField(j, "aquifer");
  r.reservoir = numberField(j, "reservoir");
  const auto& f = arrayField(j, "financial");
  const auto& p = arrayField(j, "political");
  if (f.size() != r.financial.size() || p.size() != r.political.size()) {
    throw Error(ErrorCode::Malformed, "objective report arrays have the wrong length");
  }
  try {
    for (std::size_t i = 0; i < f.size(); ++i) r.financial[i] = f[i].get<double>();
    for (std::size_t i = 0; i < p.size(); ++i) r.political[i] = p[i].get<double>();
    r.budgetViolations = arrayField(j, "budgetViolations").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Malformed, std::string("objective report: ") + e.what());
  }
  r.joint = numberField(j, "joint");
  return r;
}

const std::string& stringField(const Json& m, const char* name) {
  auto it = m.find(name);
  if (it == m.end() || !it->is_string()) {
    throw Error(ErrorCode::Malformed, std::string("field '") + name + "' must be a string");
  }
  return it->get_ref<const std::string&>();
}

int intField(const Json& m, const char* name) {
  auto it = m.find(name);
  if (it == m.end() || !it->is_number_integer()) {
    throw Error(ErrorCode::Malformed, std::string("field '") + name + "' must be an integer");
  }
  return it->get<int>();
}

double numberField(const Json& m, const char* name) {
  auto it = m.find(name);
  if (it == m.end() || !it->is_number()) {
    throw Error(ErrorCode::Malformed, std::string("field '") + name + "' must be a number");
  }
  return it->get<double>();
}

const Json& arrayField(const Json& m, const char* name) {
  auto it = m.find(name);
  if (it == m.end() || !it->is_array()) {
    throw Error(ErrorCode::Malformed, std::string("field '") + name + "' must be an array");
  }
  return *it;
}

}  // namespace sipg::wire
