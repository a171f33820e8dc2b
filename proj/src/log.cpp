#include "log.hpp"

#include <cstdio>

namespace sdglens {

Logger::Sink Logger::stderr_sink() {
  return [](std::string_view line) {
    std::fwrite(line.data(), 1, line.size(), stderr);
    std::fputc('\n', stderr);
  };
}

Logger::Logger() : sink_(stderr_sink()) {}

void Logger::set_sink(Sink sink) {
  std::lock_guard lock(mutex_);
  sink_ = std::move(sink);
}

void Logger::set_stage(std::string stage) {
  std::lock_guard lock(mutex_);
  stage_ = std::move(stage);
}

void Logger::info(std::string_view event, nlohmann::ordered_json fields) { emit("info", event, std::move(fields)); }
void Logger::warn(std::string_view event, nlohmann::ordered_json fields) { emit("warn", event, std::move(fields)); }
void Logger::error(std::string_view event, nlohmann::ordered_json fields) { emit("error", event, std::move(fields)); }

void Logger::emit(std::string_view level, std::string_view event, nlohmann::ordered_json fields) {
  std::lock_guard lock(mutex_);
  if (!sink_) return;
  nlohmann::ordered_json line;
  line["level"] = level;
  if (!stage_.empty()) line["stage"] = stage_;
  line["event"] = event;
  for (auto& [k, v] : fields.items()) line[k] = std::move(v);
  sink_(line.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace));
}

}  // namespace sdglens
