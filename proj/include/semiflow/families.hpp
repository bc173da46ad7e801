#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semiflow/flow.hpp"

namespace semiflow::families {

using Complex = std::complex<double>;

enum class Role { Generator, SelfMap };

struct Family {
  std::string label;
  std::string expression;
  Role role = Role::Generator;
  std::string description;
  std::optional<Complex> dw;  // known Denjoy-Wolff point, when declared
};

// The bundled model families. All but `log_selfmap` are semigroup generators;
// `log_selfmap` is a single self-map used for boundary-derivative probes.
const std::vector<Family>& registry();

const Family* find(const std::string& label);

// Builds the generator for a Generator-role entry (throws for SelfMap role).
flow::GeneratorSpec make_generator(const Family& fam);

// Parses the expression of any entry.
expr::AnalyticExpr make_expr(const Family& fam);

}  // namespace semiflow::families
