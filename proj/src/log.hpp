#pragma once

#include <functional>
#include <mutex>
#include <string>
#include <string_view>

#include <json.hpp>

namespace sdglens {

// JSON Lines logger. Each line is {"level", "stage", "event", ...fields}.
class Logger {
 public:
  using Sink = std::function<void(std::string_view line)>;

  Logger();  // writes to stderr
  explicit Logger(Sink sink) : sink_(std::move(sink)) {}

  static Sink stderr_sink();
  void set_sink(Sink sink);
  void set_stage(std::string stage);

  void info(std::string_view event, nlohmann::ordered_json fields = nlohmann::ordered_json::object());
  void warn(std::string_view event, nlohmann::ordered_json fields = nlohmann::ordered_json::object());
  void error(std::string_view event, nlohmann::ordered_json fields = nlohmann::ordered_json::object());

 private:
  void emit(std::string_view level, std::string_view event, nlohmann::ordered_json fields);

  std::mutex mutex_;
  Sink sink_;
  std::string stage_;
};

}  // namespace sdglens
