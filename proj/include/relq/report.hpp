#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace relq {

/// Minimal JSON value with insertion-ordered object keys and doubles printed
/// at 17 significant digits, so identical runs serialize byte-identically.
class JsonValue {
  public:
    JsonValue() : kind_(Kind::Null) {}
    static JsonValue number(double v);
    static JsonValue integer(std::int64_t v);
    static JsonValue boolean(bool v);
    static JsonValue string(std::string v);
    static JsonValue array();
    static JsonValue object();

    JsonValue& push(JsonValue v);                        // arrays
    JsonValue& set(const std::string& key, JsonValue v); // objects
    bool is_null() const { return kind_ == Kind::Null; }

    void write(std::string& out) const;
    std::string dump() const;

  private:
    enum class Kind { Null, Number, Integer, Bool, String, Array, Object };
    Kind kind_;
    double num_ = 0.0;
    std::int64_t int_ = 0;
    bool bool_ = false;
    std::string str_;
    std::vector<JsonValue> arr_;
    std::vector<std::pair<std::string, JsonValue>> obj_;
};

std::string format_double(double v);  // %.17g

struct Report {
    std::string command;
    std::string version = "0.1.0";
    std::optional<std::uint64_t> seed;
    std::vector<std::pair<std::string, JsonValue>> params;      // echo, fixed order
    std::map<std::string, std::string> provenance;              // param -> flag/config/default
    std::map<std::string, JsonValue> results;
    std::map<std::string, double> residuals;
    std::map<std::string, double> tolerances;
    std::map<std::string, double> tails;
    double wall_ms = 0.0;  // stderr only; never serialized

    void add_residual(const std::string& key, double value, double tolerance);
    void add_result(const std::string& key, double value);
    void add_result(const std::string& key, JsonValue value);
    bool pass() const;  // every residual within its tolerance

    std::string to_json() const;
    std::string to_csv() const;  // one row per named scalar
};

Report parse_report_json(const std::string& text);  // round-trip support

/// Writes the report; "-" or empty path means stdout. Throws on unwritable
/// paths. Returns the serialized text.
std::string emit_report(const Report& r, const std::string& format, const std::string& path);

}  // namespace relq
