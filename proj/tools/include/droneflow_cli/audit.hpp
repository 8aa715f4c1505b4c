#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace droneflow_cli {

/// Statements in a bundled application source: semicolon-terminated
/// statements outside comments, string literals and char literals.
/// A statement spanning several physical lines counts once; a file of
/// only comments counts zero.
int count_api_statements(std::string_view source);

struct AuditEntry {
    std::string app;
    int statements = 0;
    int budget = 0;
    bool pass = false;
};

inline constexpr int kLocBudget = 40;

/// Audits every bundled application against the statement budget.
std::vector<AuditEntry> audit_bundled_apps(int budget = kLocBudget);

} // namespace droneflow_cli
