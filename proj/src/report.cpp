#include "relq/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

namespace relq {

JsonValue JsonValue::number(double v) {
    JsonValue j;
    j.kind_ = Kind::Number;
    j.num_ = v;
    return j;
}

JsonValue JsonValue::integer(std::int64_t v) {
    JsonValue j;
    j.kind_ = Kind::Integer;
    j.int_ = v;
    return j;
}

JsonValue JsonValue::boolean(bool v) {
    JsonValue j;
    j.kind_ = Kind::Bool;
    j.bool_ = v;
    return j;
}

JsonValue JsonValue::string(std::string v) {
    JsonValue j;
    j.kind_ = Kind::String;
    j.str_ = std::move(v);
    return j;
}

JsonValue JsonValue::array() {
    JsonValue j;
    j.kind_ = Kind::Array;
    return j;
}

JsonValue JsonValue::object() {
    JsonValue j;
    j.kind_ = Kind::Object;
    return j;
}

JsonValue& JsonValue::push(JsonValue v) {
    if (kind_ != Kind::Array) throw std::logic_error("JsonValue::push on non-array");
    arr_.push_back(std::move(v));
    return *this;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
    if (kind_ != Kind::Object) throw std::logic_error("JsonValue::set on non-object");
    for (auto& [k, old] : obj_)
        if (k == key) {
            old = std::move(v);
            return *this;
        }
    obj_.emplace_back(key, std::move(v));
    return *this;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void write_escaped(const std::string& s, std::string& out) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    out += '"';
}

}  // namespace

void JsonValue::write(std::string& out) const {
    switch (kind_) {
        case Kind::Null: out += "null"; break;
        case Kind::Number: out += format_double(num_); break;
        case Kind::Integer: out += std::to_string(int_); break;
        case Kind::Bool: out += bool_ ? "true" : "false"; break;
        case Kind::String: write_escaped(str_, out); break;
        case Kind::Array: {
            out += '[';
            for (size_t i = 0; i < arr_.size(); ++i) {
                if (i) out += ',';
                arr_[i].write(out);
            }
            out += ']';
            break;
        }
        case Kind::Object: {
            out += '{';
            for (size_t i = 0; i < obj_.size(); ++i) {
                if (i) out += ',';
                write_escaped(obj_[i].first, out);
                out += ':';
                obj_[i].second.write(out);
            }
            out += '}';
            break;
        }
    }
}

std::string JsonValue::dump() const {
    std::string out;
    write(out);
    return out;
}

void Report::add_residual(const std::string& key, double value, double tolerance) {
    residuals[key] = value;
    tolerances[key] = tolerance;
}

void Report::add_result(const std::string& key, double value) {
    results[key] = JsonValue::number(value);
}

void Report::add_result(const std::string& key, JsonValue value) {
    results[key] = std::move(value);
}

bool Report::pass() const {
    for (const auto& [key, value] : residuals) {
        auto it = tolerances.find(key);
        if (it == tolerances.end()) return false;  // invariant: tolerance always present
        if (!(value <= it->second)) return false;
    }
    return true;
}

std::string Report::to_json() const {
    JsonValue root = JsonValue::object();
    root.set("command", JsonValue::string(command));
    root.set("version", JsonValue::string(version));
    if (seed) root.set("seed", JsonValue::integer(static_cast<std::int64_t>(*seed)));

    JsonValue p = JsonValue::object();
    for (const auto& [k, v] : params) p.set(k, v);
    root.set("params", std::move(p));

    if (!provenance.empty()) {
        JsonValue pv = JsonValue::object();
        for (const auto& [k, v] : provenance) pv.set(k, JsonValue::string(v));
        root.set("provenance", std::move(pv));
    }

    JsonValue res = JsonValue::object();
    for (const auto& [k, v] : results) res.set(k, v);
    root.set("results", std::move(res));

    JsonValue rd = JsonValue::object();
    for (const auto& [k, v] : residuals) rd.set(k, JsonValue::number(v));
    root.set("residuals", std::move(rd));

    JsonValue tl = JsonValue::object();
    for (const auto& [k, v] : tolerances) tl.set(k, JsonValue::number(v));
    root.set("tolerances", std::move(tl));

    if (!tails.empty()) {
        JsonValue tc = JsonValue::object();
        for (const auto& [k, v] : tails) tc.set(k, JsonValue::number(v));
        root.set("tail_certificates", std::move(tc));
    }
    root.set("pass", JsonValue::boolean(pass()));
    return root.dump() + "\n";
}

std::string Report::to_csv() const {
    std::string out = "key,value\n";
    auto scalar = [&](const std::string& k, double v) {
        out += k;
        out += ',';
        out += format_double(v);
        out += '\n';
    };
    // named scalars only: results that are plain numbers, then residuals
    for (const auto& [k, v] : results) {
        std::string d = v.dump();
        if (!d.empty() && d != "null" && d[0] != '[' && d[0] != '{' && d[0] != '"')
            out += "results." + k + "," + d + "\n";
    }
    for (const auto& [k, v] : residuals) scalar("residuals." + k, v);
    for (const auto& [k, v] : tolerances) scalar("tolerances." + k, v);
    for (const auto& [k, v] : tails) scalar("tails." + k, v);
    out += "pass,";
    out += pass() ? "1" : "0";
    out += '\n';
    return out;
}

Report parse_report_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    Report r;
    r.command = doc.at("command").get<std::string>();
    r.version = doc.at("version").get<std::string>();
    if (doc.contains("seed")) r.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("params"))
        for (const auto& [k, v] : doc["params"].items()) {
            if (v.is_number_integer())
                r.params.emplace_back(k, JsonValue::integer(v.get<std::int64_t>()));
            else if (v.is_number())
                r.params.emplace_back(k, JsonValue::number(v.get<double>()));
            else if (v.is_string())
                r.params.emplace_back(k, JsonValue::string(v.get<std::string>()));
        }
    for (const auto& [k, v] : doc["results"].items())
        if (v.is_number()) r.results[k] = JsonValue::number(v.get<double>());
    for (const auto& [k, v] : doc["residuals"].items()) r.residuals[k] = v.get<double>();
    for (const auto& [k, v] : doc["tolerances"].items()) r.tolerances[k] = v.get<double>();
    if (doc.contains("tail_certificates"))
        for (const auto& [k, v] : doc["tail_certificates"].items()) r.tails[k] = v.get<double>();
    return r;
}

std::string emit_report(const Report& r, const std::string& format, const std::string& path) {
    std::string text;
    if (format == "json")
        text = r.to_json();
    else if (format == "csv")
        text = r.to_csv();
    else
        throw std::invalid_argument("emit_report: unknown format " + format);

    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("emit_report: cannot open " + path);
        out << text;
        if (!out.good()) throw std::runtime_error("emit_report: write failed for " + path);
    }
    return text;
}

}  // namespace relq
