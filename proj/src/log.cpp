#include "fraclap/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace fraclap::log {

namespace {
std::atomic<Level> g_level{Level::Warning};
std::mutex g_mutex;

void emit(const char* tag, std::string_view message) {
    const std::lock_guard lock(g_mutex);
    std::cerr << "[fraclap " << tag << "] " << message << '\n';
}
}  // namespace

void set_level(Level level) { g_level.store(level); }
Level level() { return g_level.load(); }

void warning(std::string_view message) {
    if (g_level.load() >= Level::Warning) {
        emit("warning", message);
    }
}

void info(std::string_view message) {
    if (g_level.load() >= Level::Info) {
        emit("info", message);
    }
}

}  // namespace fraclap::log
