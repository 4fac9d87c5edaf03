#include "lacuna/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <optional>

namespace lacuna::log {

namespace {

std::optional<Level> g_level;
std::mutex g_mutex;

Level from_env()
{
    const char* e = std::getenv("LACUNA_LOG");
    if (!e) return Level::warn;
    const std::string s(e);
    if (s == "error") return Level::error;
    if (s == "info") return Level::info;
    if (s == "debug") return Level::debug;
    return Level::warn;
}

const char* tag(Level l)
{
    switch (l) {
    case Level::error: return "error";
    case Level::warn: return "warn";
    case Level::info: return "info";
    case Level::debug: return "debug";
    }
    return "";
}

}  // namespace

Level level()
{
    std::lock_guard lock(g_mutex);
    if (!g_level) g_level = from_env();
    return *g_level;
}

void set_level(Level l)
{
    std::lock_guard lock(g_mutex);
    g_level = l;
}

void write(Level l, const std::string& msg)
{
    if (static_cast<int>(l) > static_cast<int>(level())) return;
    std::lock_guard lock(g_mutex);
    std::cerr << "[lacuna " << tag(l) << "] " << msg << '\n';
}

}  // namespace lacuna::log
