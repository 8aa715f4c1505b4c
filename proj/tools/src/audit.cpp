#include "droneflow_cli/audit.hpp"

#include "embedded_app_sources.hpp"

namespace droneflow_cli {

int count_api_statements(std::string_view source) {
    enum class State { Code, LineComment, BlockComment, String, Char };
    State state = State::Code;
    int statements = 0;
    for (std::size_t i = 0; i < source.size(); ++i) {
        const char c = source[i];
        const char next = i + 1 < source.size() ? source[i + 1] : '\0';
        switch (state) {
        case State::Code:
            if (c == '/' && next == '/') {
                state = State::LineComment;
                ++i;
            } else if (c == '/' && next == '*') {
                state = State::BlockComment;
                ++i;
            } else if (c == '"') {
                state = State::String;
            } else if (c == '\'') {
                state = State::Char;
            } else if (c == ';') {
                ++statements;
            }
            break;
        case State::LineComment:
            if (c == '\n') state = State::Code;
            break;
        case State::BlockComment:
            if (c == '*' && next == '/') {
                state = State::Code;
                ++i;
            }
            break;
        case State::String:
            if (c == '\\') ++i;
            else if (c == '"') state = State::Code;
            break;
        case State::Char:
            if (c == '\\') ++i;
            else if (c == '\'') state = State::Code;
            break;
        }
    }
    return statements;
}

std::vector<AuditEntry> audit_bundled_apps(int budget) {
    std::vector<AuditEntry> entries;
    for (const auto& [app, source] : embedded::bundled_app_sources()) {
        AuditEntry e;
        e.app = app;
        e.statements = count_api_statements(source);
        e.budget = budget;
        e.pass = e.statements <= budget;
        entries.push_back(std::move(e));
    }
    return entries;
}

} // namespace droneflow_cli
