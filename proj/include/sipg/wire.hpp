#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sipg/error.hpp"
#include "sipg/ledger.hpp"
#include "sipg/objectives.hpp"
#include "sipg/scenario.hpp"

namespace sipg::wire {

using Json = nlohmann::json;

inline constexpr int kProtocolVersion = 1;
/// Frames larger than this are rejected as malformed.
inline constexpr std::uint32_t kMaxFrameBytes = 64u << 20;

/// Session variants: synchronous with quantitative (1A) or qualitative (1B)
/// joint objective, or asynchronous file exchange (2).
enum class Variant { Sync1A, Sync1B, Async2 };
const char* toString(Variant v);
std::optional<Variant> parseVariant(std::string_view text);

/// Four-byte big-endian payload length followed by compact JSON text.
std::string encodeFrame(const Json& message);

/// Incremental splitter for a byte stream of frames.
class FrameDecoder {
 public:
  void feed(std::string_view bytes);
  /// Next complete message, if any. Throws Error(Malformed) for oversized
  /// frames or payloads that are not a JSON object.
  std::optional<Json> next();
  std::size_t buffered() const { return buffer_.size(); }

 private:
  std::string buffer_;
};

/// Base object for an outgoing message.
Json message(std::string_view kind, std::string_view federateId);
Json errorMessage(std::string_view federateId, ErrorCode code, std::string_view text);

/// (className, attribute) pair as carried in join declarations.
Json keyPair(FlowKey key);
/// Parses a declaration pair; nullopt when the pair is not in the object model.
std::optional<FlowKey> parseKeyPair(const Json& pair);

struct AttributeUpdate {
  std::string federateId;
  FlowKey key = FlowKey::Population;
  std::string objectName;
  double value = 0.0;
  int year = 0;
  int iteration = 0;
};

/// attr_update message addressed from/to federateId.
Json toMessage(const AttributeUpdate& update, std::string_view federateId);

/// Private ledger rows shipped on resign.
Json ledgerRows(const FlowLedger& ledger);
/// Throws Error(Malformed) for unknown keys or bad fields.
FlowLedger parseLedgerRows(const Json& rows);

Json toJson(const objectives::ObjectiveReport& report);
/// Throws Error(Malformed) for missing fields.
objectives::ObjectiveReport reportFromJson(const Json& j);

// Typed field access; throw Error(Malformed) naming the field.
const std::string& stringField(const Json& m, const char* name);
int intField(const Json& m, const char* name);
double numberField(const Json& m, const char* name);
const Json& arrayField(const Json& m, const char* name);

}  // namespace sipg::wire
