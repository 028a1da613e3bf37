#pragma once

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

namespace qclab {

enum class log_level { error = 0, info = 1, debug = 2 };

// Verbosity comes from the QCLAB_LOG environment variable (error|info|debug),
// read once.  Everything goes to stderr so stdout stays machine-readable.
inline log_level active_log_level() {
    static const log_level level = [] {
        const char* env = std::getenv("QCLAB_LOG");
        if (env == nullptr) return log_level::error;
        std::string v(env);
        if (v == "debug") return log_level::debug;
        if (v == "info") return log_level::info;
        return log_level::error;
    }();
    return level;
}

inline void log_message(log_level level, const std::string& msg) {
    if (static_cast<int>(level) > static_cast<int>(active_log_level())) return;
    const char* tag = level == log_level::error ? "error" : level == log_level::info ? "info" : "debug";
    std::cerr << "[qclab:" << tag << "] " << msg << '\n';
}

#define QCLAB_LOG_AT(level, expr)                                        \
    do {                                                                 \
        if (static_cast<int>(level) <=                                   \
            static_cast<int>(::qclab::active_log_level())) {             \
            std::ostringstream qclab_log_stream_;                        \
            qclab_log_stream_ << expr;                                   \
            ::qclab::log_message(level, qclab_log_stream_.str());        \
        }                                                                \
    } while (0)

#define QCLAB_INFO(expr) QCLAB_LOG_AT(::qclab::log_level::info, expr)
#define QCLAB_DEBUG(expr) QCLAB_LOG_AT(::qclab::log_level::debug, expr)

}  // namespace qclab
