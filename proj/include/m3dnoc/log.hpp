// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace m3dnoc {

// Verbosity from M3D_NOC_LOG: quiet (default), "info"/"1", "debug"/"2".
inline int log_level() {
    static int lvl = [] {
        const char *env = std::getenv("M3D_NOC_LOG");
        if (!env)
            return 0;
        std::string s(env);
        if (s == "debug" || s == "2")
            return 2;
        if (s == "info" || s == "1")
            return 1;
        return 0;
    }();
    return lvl;
}

inline void log_info(const std::string &msg) {
    if (log_level() >= 1)
        std::fprintf(stderr, "[m3dnoc] %s\n", msg.c_str());
}

inline void log_debug(const std::string &msg) {
    if (log_level() >= 2)
        std::fprintf(stderr, "[m3dnoc:debug] %s\n", msg.c_str());
}

} // namespace m3dnoc
