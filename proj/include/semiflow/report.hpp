#pragma once

#include <complex>
#include <string>

#include <json.hpp>

#include "semiflow/error.hpp"

namespace semiflow::report {

inline constexpr int kSchemaVersion = 1;

// Canonical serialization: keys sorted, two-space indent, every float
// printed with 17 significant digits. Byte-identical across runs for
// identical inputs. Non-finite floats serialize as null.
std::string dump(const nlohmann::json& j);

nlohmann::json to_json(std::complex<double> c);

// {"error": {"code": ..., "message": ..., "offset"?: ...}}
nlohmann::json error_json(const Error& e);

}  // namespace semiflow::report
