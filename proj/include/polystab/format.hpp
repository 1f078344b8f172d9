#pragma once

#include <charconv>
#include <string>

namespace polystab {

// Shortest round-trip decimal form, deterministic across runs (CSV and
// JSON payloads are byte-compared in the determinism checks).
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace polystab
