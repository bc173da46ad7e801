#include "semiflow/report.hpp"

#include <cmath>
#include <cstdio>

namespace semiflow::report {

namespace {

void dump_value(const nlohmann::json& j, std::string& out, int indent) {
  using value_t = nlohmann::json::value_t;
  switch (j.type()) {
    case value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::string pad(indent + 2, ' ');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // nlohmann objects iterate sorted
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        dump_value(it.value(), out, indent + 2);
      }
      out += '\n';
      out.append(indent, ' ');
      out += '}';
      return;
    }
    case value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      std::string pad(indent + 2, ' ');
      bool first = true;
      for (const auto& el : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_value(el, out, indent + 2);
      }
      out += '\n';
      out.append(indent, ' ');
      out += ']';
      return;
    }
    case value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump(const nlohmann::json& j) {
  std::string out;
  dump_value(j, out, 0);
  out += '\n';
  return out;
}

nlohmann::json to_json(std::complex<double> c) {
  return nlohmann::json{{"re", c.real()}, {"im", c.imag()}};
}

nlohmann::json error_json(const Error& e) {
  nlohmann::json err{{"code", error_code_name(e.code())}, {"message", e.what()}};
  if (const auto* pe = dynamic_cast<const ParseError*>(&e))
    err["offset"] = static_cast<long long>(pe->offset());
  return nlohmann::json{{"error", err}};
}

}  // namespace semiflow::report
