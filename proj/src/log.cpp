#include "ruenergy/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <string>

namespace ruenergy::log {

Level threshold() {
    static const Level level = [] {
        const char* env = std::getenv("RUENERGY_LOG");
        const std::string v = env ? env : "";
        if (v == "error") return Level::Error;
        if (v == "info") return Level::Info;
        if (v == "debug") return Level::Debug;
        return Level::Warn;
    }();
    return level;
}

void write(Level level, std::string_view message) {
    if (level > threshold()) return;
    static std::mutex mutex;
    static const char* const names[] = {"error", "warn", "info", "debug"};
    std::lock_guard lock(mutex);
    std::fprintf(stderr, "[%s] %.*s\n", names[static_cast<int>(level)], static_cast<int>(message.size()),
                 message.data());
}

} // namespace ruenergy::log
